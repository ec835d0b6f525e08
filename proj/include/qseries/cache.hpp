#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qseries/series.hpp"

namespace qseries {

/// Content-addressed store of expansions.  The key names the constructor, its
/// parameters and the ring; the stored entry keeps the widest order computed
/// so far, and narrower requests are served by truncation.  A corrupt entry
/// is recomputed and overwritten with a warning on stderr.
class SeriesCache {
 public:
  // Empty dir disables caching; the QFORMS_CACHE environment variable
  // overrides a default-constructed cache.
  explicit SeriesCache(std::string dir = "");

  bool enabled() const { return !dir_.empty(); }

  /// Returns the cached series truncated to `order` (an index on the series'
  /// own grid) when the entry covers it; otherwise runs `producer`, stores the
  /// result and returns it.
  FracSeries get(const std::string& key, long order,
                 const std::function<FracSeries()>& producer);

  std::string path_for(const std::string& key) const;

 private:
  std::string dir_;
};

}  // namespace qseries
