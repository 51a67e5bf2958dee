#include "twowell/field_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "twowell/errors.hpp"

namespace twowell {

namespace {

std::string fmt15(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void write_header(std::ostream& os, const char* kind, const GridSpec& g) {
  os << "field " << kind << " n=" << g.n << " L=" << fmt15(g.L) << '\n';
}

GridSpec read_header(std::istream& is, const std::string& expected) {
  std::string line;
  if (!std::getline(is, line)) throw ShapeError("field dump: missing header");
  std::istringstream hs(line);
  std::string tag, kind, ntok, ltok;
  hs >> tag >> kind >> ntok >> ltok;
  if (tag != "field" || kind != expected || ntok.rfind("n=", 0) != 0 || ltok.rfind("L=", 0) != 0) {
    throw ShapeError("field dump: bad header '" + line + "' (expected " + expected + ")");
  }
  return GridSpec::make(std::stoi(ntok.substr(2)), std::stod(ltok.substr(2)));
}

double next_number(std::istream& is) {
  std::string tok;
  if (!(is >> tok)) throw ShapeError("field dump: truncated data");
  double x = 0.0;
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc{} || end != tok.data() + tok.size()) {
    throw ShapeError("field dump: bad number '" + tok + "'");
  }
  return x;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
  write_header(os, "scalar", f.grid);
  const int n = f.grid.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) os << (i ? " " : "") << fmt15(f.at(i, j));
    os << '\n';
  }
}

void write_field(std::ostream& os, const VectorField& f) {
  write_header(os, "vector", f.grid);
  const int n = f.grid.n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Vec2& p = f.at(i, j);
      os << (i ? " " : "") << fmt15(p.x1) << ' ' << fmt15(p.x2);
    }
    os << '\n';
  }
}

ScalarField read_scalar_field(std::istream& is) {
  ScalarField f(read_header(is, "scalar"));
  for (double& x : f.values) x = next_number(is);
  return f;
}

VectorField read_vector_field(std::istream& is) {
  VectorField f(read_header(is, "vector"));
  for (Vec2& p : f.values) {
    p.x1 = next_number(is);
    p.x2 = next_number(is);
  }
  return f;
}

void save_field(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field(os, f);
}

void save_field(const std::string& path, const VectorField& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field(os, f);
}

}  // namespace twowell
