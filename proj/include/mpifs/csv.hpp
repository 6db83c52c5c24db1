#pragma once

#include <iosfwd>
#include <string>

#include "mpifs/density.hpp"
#include "mpifs/fuzzy.hpp"

namespace mpifs {

/// Density CSV: header `x1,...,xd,lambda`, every field %.6f, LF line endings.
/// -inf rows are never emitted (they are not stored either).
void write_density_csv(std::ostream& os, const DensityMap& mu);
DensityMap read_density_csv(std::istream& is);
DensityMap read_density_csv_file(const std::string& path);

/// Fuzzy CSV: header `x1,...,xd,u`, same formatting; zero rows never emitted.
void write_fuzzy_csv(std::ostream& os, const FuzzyMap& u);
FuzzyMap read_fuzzy_csv(std::istream& is);

}  // namespace mpifs
