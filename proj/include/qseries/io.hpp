#pragma once

#include <iosfwd>
#include <string>

#include "qseries/series.hpp"

namespace qseries {

// Series interchange format, one series per file:
//   m=<int> lo=<int> hi=<int> ring=<Q|Zp p M>
//   <index> <numerator>/<denominator>     (exact ring)
//   <index> <residue>                     (mod ring)
// Zero coefficients are omitted; lines are ordered by index.  Round-trips
// exactly.
void write_series(std::ostream& os, const FracSeries& f);
FracSeries read_series(std::istream& is);

std::string series_to_string(const FracSeries& f);
FracSeries series_from_string(const std::string& text);

void write_series_file(const std::string& path, const FracSeries& f);
FracSeries read_series_file(const std::string& path);

}  // namespace qseries
