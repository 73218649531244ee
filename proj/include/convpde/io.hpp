#pragma once

#include <iosfwd>
#include <string>

#include "convpde/diagnostics.hpp"

namespace convpde::io {

/// 17 significant digits: enough to round-trip an IEEE double exactly.
std::string fmt17(double v);

void write_series_csv(std::ostream& os, const NormSeries& series);

}  // namespace convpde::io
