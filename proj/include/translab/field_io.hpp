// field_io.hpp
//
// Plain-text grid files:
//
//   GRID nx ny h ox oy mask=<shape descriptor>
//   v(0,0) v(1,0) ... v(nx-1,0)
//   ...
//
// ny lines of nx whitespace-separated values; line j holds the nodes with
// x2 = oy + j h. Blank lines are ignored. OUTSIDE nodes are written as `nan`. The mask is rebuilt
// from the descriptor on read.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "translab/grid.hpp"

namespace translab {

/// Malformed input; carries the 1-based line number of the offending line.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

void write_grid(std::ostream& os, const ScalarField& f);
ScalarField read_grid(std::istream& is);

void save_grid(const std::filesystem::path& path, const ScalarField& f);
ScalarField load_grid(const std::filesystem::path& path);

/// Shortest round-trip decimal form used by every text writer in the project.
std::string format_double(double v);

}  // namespace translab
