#include <iostream>
#include <string>
#include <vector>

#include "translab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return translab::run_cli(args, std::cout, std::cerr);
}
