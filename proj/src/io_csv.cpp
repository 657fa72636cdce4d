#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "emsnet/errors.hpp"
#include "emsnet/io.hpp"

namespace emsnet::io {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim = ',') {
  std::vector<std::string> out;
  std::string field;
  for (const char c : line) {
    if (c == delim) {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  return lines;
}

// Column lookup over a parsed header.
class Header {
 public:
  Header(const std::string& line, const std::string& source)
      : columns_(split_line(line)), source_(source) {}

  long find(const std::string& name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    return it == columns_.end() ? -1 : static_cast<long>(it - columns_.begin());
  }

  long require(const std::string& name) const {
    const long idx = find(name);
    if (idx < 0) {
      throw ParseError(source_, 1, "missing required column '" + name + "'");
    }
    return idx;
  }

  std::size_t size() const { return columns_.size(); }

 private:
  std::vector<std::string> columns_;
  std::string source_;
};

double parse_number(const std::string& token, const std::string& source, long line) {
  if (token.empty()) {
    throw ParseError(source, line, "empty numeric field");
  }
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == nullptr || *end != '\0' || !std::isfinite(v)) {
    throw ParseError(source, line, "malformed number '" + token + "'");
  }
  return v;
}

bool parse_bool(const std::string& token, const std::string& source, long line) {
  if (token == "1" || token == "true") return true;
  if (token == "0" || token == "false") return false;
  throw ParseError(source, line, "malformed boolean '" + token + "' (expected 0/1/true/false)");
}

const std::string& field_at(const std::vector<std::string>& fields, long idx,
                            const std::string& source, long line) {
  if (idx < 0 || static_cast<std::size_t>(idx) >= fields.size()) {
    throw ParseError(source, line, "row has too few fields");
  }
  return fields[static_cast<std::size_t>(idx)];
}

std::string iso8601_utc(double epoch_s) {
  // Inverse of days_from_civil. Rounding to milliseconds first keeps the
  // fractional part from carrying past the emitted seconds.
  const std::int64_t total_ms = std::llround(epoch_s * 1000.0);
  std::int64_t days = total_ms / 86'400'000;
  std::int64_t rem_ms = total_ms % 86'400'000;
  if (rem_ms < 0) {
    rem_ms += 86'400'000;
    days -= 1;
  }
  const std::int64_t secs = rem_ms / 1000;
  const std::int64_t ms = rem_ms % 1000;

  std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = yoe + era * 400;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp + (mp < 10 ? 3 : -9);
  const std::int64_t year = y + (m <= 2 ? 1 : 0);

  char buf[96];
  std::snprintf(buf, sizeof(buf), "%04" PRId64 "-%02" PRId64 "-%02" PRId64
                                  "T%02" PRId64 ":%02" PRId64 ":%02" PRId64,
                year, m, d, secs / 3600, (secs / 60) % 60, secs % 60);
  std::string out(buf);
  if (ms > 0) {
    char fbuf[8];
    std::snprintf(fbuf, sizeof(fbuf), ".%03" PRId64, ms);
    out += fbuf;
  }
  out += "Z";
  return out;
}

}  // namespace

void Warnings::add(std::string message) {
  if (std::find(messages.begin(), messages.end(), message) == messages.end()) {
    messages.push_back(std::move(message));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
  return buf;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::vector<NodeRecord> parse_nodes_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(source, 0, "empty node file");
  }
  const Header header(lines[0], source);
  const long id_col = header.require("node_id");
  const long x_col = header.require("x");
  const long y_col = header.require("y");

  std::vector<NodeRecord> out;
  out.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_line(lines[i]);
    NodeRecord rec;
    rec.id = field_at(fields, id_col, source, line_no);
    if (rec.id.empty()) {
      throw ParseError(source, line_no, "empty node_id");
    }
    rec.x = parse_number(field_at(fields, x_col, source, line_no), source, line_no);
    rec.y = parse_number(field_at(fields, y_col, source, line_no), source, line_no);
    out.push_back(std::move(rec));
  }
  return out;
}

std::string emit_nodes_csv(const std::vector<NodeRecord>& nodes) {
  std::string out = "node_id,x,y\n";
  for (const NodeRecord& n : nodes) {
    out += n.id + "," + format_double(n.x) + "," + format_double(n.y) + "\n";
  }
  return out;
}

std::vector<EdgeRecord> parse_edges_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(source, 0, "empty edge file");
  }
  const Header header(lines[0], source);
  const long id_col = header.require("edge_id");
  const long from_col = header.require("from");
  const long to_col = header.require("to");
  const long length_col = header.find("length_m");
  const long mps_col = header.find("speed_mps");
  const long mph_col = header.find("speed_mph");
  if (mps_col < 0 && mph_col < 0) {
    throw ParseError(source, 1, "missing speed column (speed_mps or speed_mph)");
  }
  const long class_col = header.find("road_class");
  const long oneway_col = header.find("oneway");

  std::vector<EdgeRecord> out;
  out.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_line(lines[i]);
    EdgeRecord rec;
    rec.id = field_at(fields, id_col, source, line_no);
    rec.from = field_at(fields, from_col, source, line_no);
    rec.to = field_at(fields, to_col, source, line_no);
    if (length_col >= 0) {
      const std::string& token = field_at(fields, length_col, source, line_no);
      if (!token.empty()) {
        rec.length_m = parse_number(token, source, line_no);
      }
    }
    if (mps_col >= 0 && !field_at(fields, mps_col, source, line_no).empty()) {
      rec.speed_mps = parse_number(fields[mps_col], source, line_no);
    } else if (mph_col >= 0) {
      rec.speed_mps =
          parse_number(field_at(fields, mph_col, source, line_no), source, line_no) * kMphToMps;
    } else {
      throw ParseError(source, line_no, "edge '" + rec.id + "' has no speed value");
    }
    if (class_col >= 0) {
      const std::string& name = field_at(fields, class_col, source, line_no);
      const auto rc = road_class_from_name(name);
      if (!rc) {
        throw ParseError(source, line_no, "unknown road_class '" + name + "'");
      }
      rec.road_class = *rc;
    }
    if (oneway_col >= 0) {
      rec.oneway = parse_bool(field_at(fields, oneway_col, source, line_no), source, line_no);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string emit_edges_csv(const std::vector<EdgeRecord>& edges) {
  std::string out = "edge_id,from,to,length_m,speed_mps,road_class,oneway\n";
  for (const EdgeRecord& e : edges) {
    out += e.id + "," + e.from + "," + e.to + ",";
    if (e.length_m) {
      out += format_double(*e.length_m);
    }
    out += "," + format_double(e.speed_mps) + "," + std::string(road_class_name(e.road_class)) +
           "," + (e.oneway ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<TripRecord> parse_trips_csv(const std::string& text, const std::string& source,
                                        Warnings* warnings) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(source, 0, "empty trip file");
  }
  const Header header(lines[0], source);
  const long dispatch_col = header.require("dispatch_ts");
  const long arrival_col = header.require("arrival_ts");
  const long severity_col = header.find("severity");

  std::vector<TripRecord> out;
  std::size_t naive_count = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_line(lines[i]);
    bool naive = false;
    const std::string& dispatch_ts = field_at(fields, dispatch_col, source, line_no);
    const std::string& arrival_ts = field_at(fields, arrival_col, source, line_no);
    const auto dispatch = parse_iso8601(dispatch_ts, &naive);
    if (!dispatch) {
      throw ParseError(source, line_no, "malformed dispatch timestamp '" + dispatch_ts + "'");
    }
    const auto arrival = parse_iso8601(arrival_ts, &naive);
    if (!arrival) {
      throw ParseError(source, line_no, "malformed arrival timestamp '" + arrival_ts + "'");
    }
    if (*arrival < *dispatch) {
      throw ParseError(source, line_no, "arrival precedes dispatch");
    }
    if (naive) {
      ++naive_count;
    }
    TripRecord rec{*dispatch, *arrival, {}};
    if (severity_col >= 0 && static_cast<std::size_t>(severity_col) < fields.size()) {
      rec.severity = fields[static_cast<std::size_t>(severity_col)];
    }
    out.push_back(std::move(rec));
  }
  if (naive_count > 0 && warnings != nullptr) {
    warnings->add(source + ": " + std::to_string(naive_count) +
                  " timestamp(s) without offset assumed UTC");
  }
  return out;
}

std::string emit_trips_csv(const std::vector<TripRecord>& trips) {
  std::string out = "dispatch_ts,arrival_ts,severity\n";
  for (const TripRecord& t : trips) {
    out += iso8601_utc(t.dispatch_epoch_s) + "," + iso8601_utc(t.arrival_epoch_s) + "," +
           t.severity + "\n";
  }
  return out;
}

std::string emit_field_csv(const RoadNetwork& network, const TravelTimeField& field) {
  std::string out = "node_id,x,y,seconds\n";
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    const RoadNetwork::Node& n = network.node(v);
    out += n.id + "," + format_double(n.x) + "," + format_double(n.y) + ",";
    out += is_reachable(field.seconds[v]) ? format_double(field.seconds[v]) : "unreachable";
    out += "\n";
  }
  return out;
}

std::vector<FieldRow> parse_field_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(source, 0, "empty field file");
  }
  const Header header(lines[0], source);
  const long id_col = header.require("node_id");
  const long x_col = header.require("x");
  const long y_col = header.require("y");
  const long s_col = header.require("seconds");

  std::vector<FieldRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_line(lines[i]);
    FieldRow row;
    row.node_id = field_at(fields, id_col, source, line_no);
    row.x = parse_number(field_at(fields, x_col, source, line_no), source, line_no);
    row.y = parse_number(field_at(fields, y_col, source, line_no), source, line_no);
    const std::string& token = field_at(fields, s_col, source, line_no);
    row.seconds = token == "unreachable" ? kUnreachable
                                         : parse_number(token, source, line_no);
    out.push_back(std::move(row));
  }
  return out;
}

std::string emit_density_csv(const RoadNetwork& network, const DensityField& density) {
  std::string out = "node_id,x,y,density\n";
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    const RoadNetwork::Node& n = network.node(v);
    out += n.id + "," + format_double(n.x) + "," + format_double(n.y) + "," +
           format_double(density.values[v]) + "\n";
  }
  return out;
}

std::string emit_weights_csv(const RoadNetwork& network, const PopulationWeights& weights) {
  std::string out = "node_id,persons\n";
  for (NodeIndex v = 0; v < network.node_count(); ++v) {
    out += network.node(v).id + "," + format_double(weights.weights[v]) + "\n";
  }
  return out;
}

std::vector<WeightRow> parse_weights_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(source, 0, "empty weights file");
  }
  const Header header(lines[0], source);
  const long id_col = header.require("node_id");
  const long persons_col = header.require("persons");

  std::vector<WeightRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_line(lines[i]);
    const double persons =
        parse_number(field_at(fields, persons_col, source, line_no), source, line_no);
    if (persons < 0.0) {
      throw ParseError(source, line_no, "negative population weight");
    }
    out.push_back({field_at(fields, id_col, source, line_no), persons});
  }
  return out;
}

std::string emit_curve_csv(const CoverageCurve& curve) {
  std::string out = "tau_seconds,covered_fraction\n";
  for (std::size_t i = 0; i < curve.taus.size(); ++i) {
    out += format_double(curve.taus[i]) + "," + format_double(curve.fractions[i]) + "\n";
  }
  return out;
}

std::string emit_scenario_csv(const ScenarioResult& scenario) {
  std::string out = "tau_seconds,coverage_before,coverage_after,delta\n";
  for (std::size_t i = 0; i < scenario.before.taus.size(); ++i) {
    out += format_double(scenario.before.taus[i]) + "," +
           format_double(scenario.before.fractions[i]) + "," +
           format_double(scenario.after.fractions[i]) + "," +
           format_double(scenario.coverage_delta[i]) + "\n";
  }
  return out;
}

std::string emit_summary_csv(const PercentileSummary& summary) {
  std::string out = "percentile,seconds\n";
  for (std::size_t i = 0; i < summary.percentiles.size(); ++i) {
    out += format_double(summary.percentiles[i]) + "," + format_double(summary.values[i]) + "\n";
  }
  out += "mean," + format_double(summary.mean) + "\n";
  return out;
}

PercentileSummary parse_summary_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw ParseError(source, 0, "empty summary file");
  }
  const Header header(lines[0], source);
  const long p_col = header.require("percentile");
  const long s_col = header.require("seconds");

  PercentileSummary summary;
  bool have_mean = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_line(lines[i]);
    const std::string& label = field_at(fields, p_col, source, line_no);
    const double value = parse_number(field_at(fields, s_col, source, line_no), source, line_no);
    if (label == "mean") {
      summary.mean = value;
      have_mean = true;
    } else {
      summary.percentiles.push_back(parse_number(label, source, line_no));
      summary.values.push_back(value);
    }
  }
  if (!have_mean) {
    throw ParseError(source, 0, "summary file is missing the mean row");
  }
  return summary;
}

std::string emit_ratio_csv(const RatioTable& table) {
  std::string out = "percentile,actual_seconds,simulated_seconds,ratio\n";
  for (const RatioRow& row : table.rows) {
    out += (row.is_mean ? std::string("mean") : format_double(row.percentile)) + "," +
           format_double(row.actual) + "," + format_double(row.simulated) + "," +
           format_double(row.ratio) + "\n";
  }
  return out;
}

}  // namespace emsnet::io
