#include "convpde/io.hpp"

#include <cstdio>
#include <ostream>

namespace convpde::io {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_series_csv(std::ostream& os, const NormSeries& series) {
    os << "t";
    for (const std::string& k : series.keys) os << ',' << k;
    os << '\n';
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        os << fmt17(series.times[i]);
        for (const auto& col : series.columns) os << ',' << fmt17(col[i]);
        os << '\n';
    }
}

}  // namespace convpde::io
