#include "qseries/cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qseries/io.hpp"

namespace qseries {

SeriesCache::SeriesCache(std::string dir) : dir_(std::move(dir)) {
  if (dir_.empty()) {
    const char* env = std::getenv("QFORMS_CACHE");
    if (env != nullptr) dir_ = env;
  }
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

static std::string fnv1a_hex(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string SeriesCache::path_for(const std::string& key) const {
  return dir_ + "/" + fnv1a_hex(key) + ".series";
}

FracSeries SeriesCache::get(const std::string& key, long order,
                            const std::function<FracSeries()>& producer) {
  if (!enabled()) return producer();
  std::string path = path_for(key);
  if (std::filesystem::exists(path)) {
    try {
      std::ifstream is(path);
      std::string stored_key;
      if (!std::getline(is, stored_key) || stored_key != "#key " + key)
        throw SeriesError("key mismatch");
      FracSeries f = read_series(is);
      if (f.hi >= order) return truncated(f, order);
    } catch (const std::exception& e) {
      std::cerr << "warning: cache entry " << path << " unusable (" << e.what()
                << "); recomputing\n";
    }
  }
  FracSeries f = producer();
  std::ofstream os(path);
  if (os) {
    os << "#key " << key << "\n";
    write_series(os, f);
  }
  return truncated(f, std::min(order, f.hi));
}

}  // namespace qseries
