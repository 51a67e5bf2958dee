#pragma once

#include <iosfwd>
#include <string>

#include "twowell/grid.hpp"

namespace twowell {

// Plain-text dump: a header `field <scalar|vector> n=<n> L=<L>` followed by
// one line per grid row j (cells for scalars, vertices for vectors). Vector
// entries are written as "x1 x2" pairs. Numbers use 15 significant digits.

void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const VectorField& f);

ScalarField read_scalar_field(std::istream& is);
VectorField read_vector_field(std::istream& is);

void save_field(const std::string& path, const ScalarField& f);
void save_field(const std::string& path, const VectorField& f);

}  // namespace twowell
