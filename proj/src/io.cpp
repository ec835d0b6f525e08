#include "qseries/io.hpp"

#include <fstream>
#include <sstream>

namespace qseries {

void write_series(std::ostream& os, const FracSeries& f) {
  os << "m=" << f.m << " lo=" << (f.is_zero() ? 0 : f.lo) << " hi=" << f.hi
     << " ring=" << f.ring.str() << "\n";
  for (long n = f.lo; n < f.lo + (long)f.c.size(); ++n) {
    const mpq_class& v = f.coeff(n);
    if (v == 0) continue;
    if (f.ring.is_exact())
      os << n << " " << v.get_num().get_str() << "/" << v.get_den().get_str() << "\n";
    else
      os << n << " " << v.get_num().get_str() << "\n";
  }
}

static long parse_field(const std::string& tok, const char* name) {
  std::string prefix = std::string(name) + "=";
  if (tok.rfind(prefix, 0) != 0)
    throw SeriesError("series header: expected " + prefix + "..., got '" + tok + "'");
  return std::stol(tok.substr(prefix.size()));
}

FracSeries read_series(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw SeriesError("series file: missing header");
  std::istringstream hs(header);
  std::string tm, tlo, thi, tring;
  hs >> tm >> tlo >> thi >> tring;
  FracSeries f;
  f.m = (int)parse_field(tm, "m");
  long lo = parse_field(tlo, "lo");
  long hi = parse_field(thi, "hi");
  if (tring == "ring=Q") {
    f.ring = Ring::exact();
  } else if (tring == "ring=Zp") {
    long p;
    int M;
    if (!(hs >> p >> M)) throw SeriesError("series header: ring=Zp needs p and M");
    f.ring = Ring::mod(p, M);
  } else {
    throw SeriesError("series header: unknown ring '" + tring + "'");
  }
  f.lo = lo;
  f.hi = hi;
  if (hi >= lo) f.c.assign((size_t)(hi - lo + 1), 0);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    long n;
    std::string val;
    if (!(ls >> n >> val)) throw SeriesError("series file: bad line '" + line + "'");
    if (n < lo || n > hi)
      throw SeriesError("series file: index " + std::to_string(n) + " outside [lo, hi]");
    mpq_class v;
    if (v.set_str(val, 10) != 0)
      throw SeriesError("series file: bad coefficient '" + val + "'");
    v.canonicalize();
    f.c[(size_t)(n - lo)] = f.ring.reduce(v);
  }
  f.normalize();
  return f;
}

std::string series_to_string(const FracSeries& f) {
  std::ostringstream os;
  write_series(os, f);
  return os.str();
}

FracSeries series_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_series(is);
}

void write_series_file(const std::string& path, const FracSeries& f) {
  std::ofstream os(path);
  if (!os) throw SeriesError("cannot open " + path + " for writing");
  write_series(os, f);
}

FracSeries read_series_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SeriesError("cannot open " + path);
  return read_series(is);
}

}  // namespace qseries
