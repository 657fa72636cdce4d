#include "emsnet/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "emsnet/errors.hpp"

namespace emsnet {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool read_digits(const std::string& s, std::size_t& pos, std::size_t count, long& out) {
  if (pos + count > s.size()) {
    return false;
  }
  long value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
    value = value * 10 + (c - '0');
  }
  pos += count;
  out = value;
  return true;
}

bool expect(const std::string& s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

}  // namespace

std::optional<double> parse_iso8601(const std::string& text, bool* naive) {
  std::size_t pos = 0;
  long year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!read_digits(text, pos, 4, year) || !expect(text, pos, '-') ||
      !read_digits(text, pos, 2, month) || !expect(text, pos, '-') ||
      !read_digits(text, pos, 2, day)) {
    return std::nullopt;
  }
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) {
    return std::nullopt;
  }
  ++pos;
  if (!read_digits(text, pos, 2, hour) || !expect(text, pos, ':') ||
      !read_digits(text, pos, 2, minute) || !expect(text, pos, ':') ||
      !read_digits(text, pos, 2, second)) {
    return std::nullopt;
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }

  double fraction = 0.0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    double scale = 0.1;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      fraction += (text[pos] - '0') * scale;
      scale *= 0.1;
      ++pos;
      any = true;
    }
    if (!any) {
      return std::nullopt;
    }
  }

  long offset_s = 0;
  bool has_offset = false;
  if (pos < text.size()) {
    const char c = text[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
      has_offset = true;
    } else if (c == '+' || c == '-') {
      const int sign = c == '+' ? 1 : -1;
      ++pos;
      long oh = 0, om = 0;
      if (!read_digits(text, pos, 2, oh)) {
        return std::nullopt;
      }
      if (pos < text.size() && text[pos] == ':') {
        ++pos;
      }
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        if (!read_digits(text, pos, 2, om)) {
          return std::nullopt;
        }
      }
      offset_s = sign * (oh * 3600 + om * 60);
      has_offset = true;
    }
  }
  if (pos != text.size()) {
    return std::nullopt;
  }
  if (!has_offset && naive != nullptr) {
    *naive = true;
  }

  const double epoch = static_cast<double>(days_from_civil(year, static_cast<unsigned>(month),
                                                           static_cast<unsigned>(day))) *
                           86400.0 +
                       hour * 3600.0 + minute * 60.0 + second + fraction;
  return epoch - static_cast<double>(offset_s);
}

std::vector<double> trip_durations(const std::vector<TripRecord>& records) {
  if (records.empty()) {
    throw ValidationError("trip record list is empty");
  }
  std::vector<double> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double d = records[i].arrival_epoch_s - records[i].dispatch_epoch_s;
    if (d < 0.0) {
      throw ValidationError("trip record " + std::to_string(i) +
                            " arrives before it is dispatched");
    }
    out.push_back(d);
  }
  return out;
}

PercentileSummary percentile_summary(std::vector<double> durations,
                                     const std::vector<double>& percentiles) {
  if (durations.empty()) {
    throw ValidationError("percentile summary requires at least one duration");
  }
  std::sort(durations.begin(), durations.end());

  PercentileSummary summary;
  summary.count = durations.size();
  summary.percentiles = percentiles;
  summary.values.reserve(percentiles.size());
  const std::size_t n = durations.size();
  for (const double p : percentiles) {
    if (p < 0.0 || p > 100.0) {
      throw ValidationError("percentile out of range: " + std::to_string(p));
    }
    const double h = static_cast<double>(n - 1) * p / 100.0;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    summary.values.push_back(durations[lo] + frac * (durations[hi] - durations[lo]));
  }
  summary.mean = std::accumulate(durations.begin(), durations.end(), 0.0) /
                 static_cast<double>(n);
  return summary;
}

RatioTable ratio_table(const PercentileSummary& actual, const PercentileSummary& simulated) {
  if (actual.percentiles != simulated.percentiles) {
    throw ValidationError("actual and simulated summaries have different percentile rows");
  }
  RatioTable table;
  table.rows.reserve(actual.values.size() + 1);
  for (std::size_t i = 0; i < actual.values.size(); ++i) {
    if (!(simulated.values[i] > 0.0)) {
      throw ValidationError("simulated value at percentile " +
                            std::to_string(actual.percentiles[i]) + " must be > 0");
    }
    table.rows.push_back({false, actual.percentiles[i], actual.values[i], simulated.values[i],
                          actual.values[i] / simulated.values[i]});
  }
  if (!(simulated.mean > 0.0)) {
    throw ValidationError("simulated mean must be > 0");
  }
  table.rows.push_back({true, 0.0, actual.mean, simulated.mean, actual.mean / simulated.mean});
  return table;
}

}  // namespace emsnet
