#include "translab/field_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace translab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_grid(std::ostream& os, const ScalarField& f) {
  const GridSpec& g = f.grid;
  os << "GRID " << g.nx << ' ' << g.ny << ' ' << format_double(g.h) << ' '
     << format_double(g.origin.x1) << ' ' << format_double(g.origin.x2)
     << " mask=" << describe(f.mask.shape()) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << ' ';
      os << (f.mask.inside(i, j) ? format_double(f.at(i, j)) : "nan");
    }
    os << '\n';
  }
}

namespace {

int parse_int(const std::string& tok, std::size_t line, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size())
    throw FormatError(line, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

double parse_real(const std::string& tok, std::size_t line, const char* what) {
  if (tok == "nan" || tok == "NaN" || tok == "NAN") return kNaN;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != tok.size())
    throw FormatError(line, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

}  // namespace

ScalarField read_grid(std::istream& is) {
  std::string text;
  std::size_t line_no = 0;
  // header
  std::string header;
  while (std::getline(is, header)) {
    ++line_no;
    if (header.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (header.empty()) throw FormatError(line_no == 0 ? 1 : line_no, "missing GRID header");
  std::istringstream hs(header);
  std::string tag, snx, sny, sh, sox, soy, smask;
  hs >> tag >> snx >> sny >> sh >> sox >> soy >> smask;
  if (tag != "GRID") throw FormatError(line_no, "expected 'GRID' header");
  if (smask.rfind("mask=", 0) != 0)
    throw FormatError(line_no, "expected mask=<shape> in header");
  std::string extra;
  if (hs >> extra) throw FormatError(line_no, "trailing token '" + extra + "' in header");
  const int nx = parse_int(snx, line_no, "nx");
  const int ny = parse_int(sny, line_no, "ny");
  const double h = parse_real(sh, line_no, "h");
  const double ox = parse_real(sox, line_no, "ox");
  const double oy = parse_real(soy, line_no, "oy");
  GridSpec grid;
  Shape shape;
  try {
    grid = GridSpec({ox, oy}, h, nx, ny);
    shape = parse_shape(smask.substr(5));
  } catch (const std::invalid_argument& e) {
    throw FormatError(line_no, e.what());
  }
  DomainMask mask(grid, shape);
  ScalarField f(grid, mask);

  int row = 0;
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    if (row >= ny) throw FormatError(line_no, "more than ny = " + std::to_string(ny) + " rows");
    if (toks.size() != static_cast<std::size_t>(nx))
      throw FormatError(line_no, "expected " + std::to_string(nx) + " values, found " +
                                     std::to_string(toks.size()));
    for (int i = 0; i < nx; ++i) {
      const double v = parse_real(toks[i], line_no, "value");
      if (mask.inside(i, row)) {
        if (!std::isfinite(v))
          throw FormatError(line_no, "non-finite value at an inside node");
        f.at(i, row) = v;
      }
    }
    ++row;
  }
  if (row != ny)
    throw FormatError(line_no + 1, "expected " + std::to_string(ny) + " rows, found " +
                                       std::to_string(row));
  return f;
}

void save_grid(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_grid(os, f);
}

ScalarField load_grid(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_grid(is);
}

}  // namespace translab
