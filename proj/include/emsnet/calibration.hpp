#pragma once

#include <optional>
#include <string>
#include <vector>

namespace emsnet {

// One dispatched trip. Times are seconds since the Unix epoch, UTC.
struct TripRecord {
  double dispatch_epoch_s = 0.0;
  double arrival_epoch_s = 0.0;
  std::string severity;
};

// Rows carry the percentile label (25, 50, ...) plus one mean row.
struct PercentileSummary {
  std::vector<double> percentiles;  // ascending
  std::vector<double> values;       // same order as `percentiles`
  double mean = 0.0;
  std::size_t count = 0;
};

struct RatioRow {
  bool is_mean = false;
  double percentile = 0.0;  // unused when is_mean
  double actual = 0.0;
  double simulated = 0.0;
  double ratio = 0.0;
};

// Actual-to-simulated comparison, one row per percentile plus the mean row.
struct RatioTable {
  std::vector<RatioRow> rows;
};

inline const std::vector<double>& default_percentiles() {
  static const std::vector<double> p{25.0, 50.0, 75.0, 97.5, 100.0};
  return p;
}

// Parses an ISO-8601 timestamp ("2023-11-18T12:00:00", optional fractional
// seconds, optional Z/±HH:MM/±HHMM offset) to epoch seconds. A timestamp
// without an offset is taken as UTC and reported through `naive` when the
// pointer is non-null. Returns nullopt on malformed input.
std::optional<double> parse_iso8601(const std::string& text, bool* naive = nullptr);

// Per-record durations in seconds. Records are assumed pre-validated
// (arrival >= dispatch); a violation still throws.
std::vector<double> trip_durations(const std::vector<TripRecord>& records);

// Linear interpolation between closest ranks: value at percentile p of n
// sorted samples is x[h] interpolated at h = (n-1) * p / 100.
PercentileSummary percentile_summary(std::vector<double> durations,
                                     const std::vector<double>& percentiles =
                                         default_percentiles());

// Rowwise actual/simulated ratios; the mean row divides the means. Requires
// matching percentile sets and positive simulated values.
RatioTable ratio_table(const PercentileSummary& actual, const PercentileSummary& simulated);

}  // namespace emsnet
