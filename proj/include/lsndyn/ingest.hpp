#pragma once

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsndyn/errors.hpp"
#include "lsndyn/graph.hpp"
#include "lsndyn/temporal.hpp"

namespace lsndyn {

enum class InputFormat { csv, jsonl };
enum class TimestampFormat { epoch_seconds, epoch_millis, iso8601 };

inline std::string_view to_string(InputFormat f) { return f == InputFormat::csv ? "csv" : "jsonl"; }

inline std::string_view to_string(TimestampFormat f) {
  switch (f) {
    case TimestampFormat::epoch_seconds: return "epoch";
    case TimestampFormat::epoch_millis: return "epoch-millis";
    case TimestampFormat::iso8601: return "iso8601";
  }
  return "?";
}

inline TimestampFormat parse_timestamp_format(std::string_view s) {
  if (s == "epoch" || s == "epoch_seconds" || s == "epoch-seconds") return TimestampFormat::epoch_seconds;
  if (s == "epoch-millis" || s == "epoch_millis" || s == "millis") return TimestampFormat::epoch_millis;
  if (s == "iso8601" || s == "iso") return TimestampFormat::iso8601;
  throw ConfigError("unknown timestamp format '" + std::string(s) + "'");
}

/// A column is addressed by zero-based position or by header/key name.
using ColumnRef = std::variant<std::size_t, std::string>;

inline std::string describe(const ColumnRef& c) {
  if (const auto* pos = std::get_if<std::size_t>(&c)) return std::to_string(*pos);
  return std::get<std::string>(c);
}

struct ColumnMap {
  ColumnRef source = std::size_t{0};
  ColumnRef target = std::size_t{1};
  ColumnRef timestamp = std::size_t{2};
  std::optional<ColumnRef> weight;

  static ColumnMap positional() { return {}; }
  static ColumnMap named() { return {std::string("source"), std::string("target"),
                                     std::string("timestamp"), std::nullopt}; }

  friend bool operator==(const ColumnMap&, const ColumnMap&) = default;
};

/// Parses "source=0,target=1,timestamp=ts[,weight=w]". Purely numeric
/// values are positions; anything else is a column name.
inline ColumnMap parse_column_map(std::string_view spec) {
  ColumnMap map;
  bool have_source = false, have_target = false, have_ts = false;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const auto item = trim(spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos));
    pos = comma == std::string_view::npos ? spec.size() + 1 : comma + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("column mapping '" + std::string(item) + "' lacks '='");
    const auto role = trim(item.substr(0, eq));
    const auto value = trim(item.substr(eq + 1));
    if (value.empty()) throw ConfigError("column mapping for '" + std::string(role) + "' is empty");
    ColumnRef ref = std::string(value);
    std::size_t index = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), index);
    if (ec == std::errc{} && p == value.data() + value.size()) ref = index;
    if (role == "source") { map.source = ref; have_source = true; }
    else if (role == "target") { map.target = ref; have_target = true; }
    else if (role == "timestamp") { map.timestamp = ref; have_ts = true; }
    else if (role == "weight") map.weight = ref;
    else throw ConfigError("unknown column role '" + std::string(role) + "'");
  }
  if (!have_source || !have_target || !have_ts) {
    throw ConfigError("column mapping must name source, target and timestamp");
  }
  return map;
}

struct IngestConfig {
  InputFormat format = InputFormat::csv;
  char delimiter = ',';
  ColumnMap columns = ColumnMap::positional();
  TimestampFormat timestamp_format = TimestampFormat::epoch_seconds;
  bool casefold_ids = false;
  bool has_header = true;
  std::int64_t default_utc_offset = 0;  // for ISO-8601 values without an offset
};

struct MalformedRow {
  std::size_t line = 0;
  std::string reason;
};

struct IngestDiagnostics {
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t self_loops_seen = 0;
  std::size_t duplicate_events = 0;  // identical (source, target, timestamp) rows
  std::vector<MalformedRow> malformed;
};

struct IngestResult {
  TemporalEdgeList events;
  IngestDiagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// Timestamps

namespace detail {

inline bool parse_int64(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size() && !s.empty();
}

inline bool parse_fixed_digits(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  out = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    out = out * 10 + (s[i] - '0');
  }
  return true;
}

}  // namespace detail

/// ISO-8601 calendar date with optional time and offset:
/// YYYY-MM-DD[(T|' ')hh:mm[:ss[.fff]]][Z|+hh[:mm]|-hh[:mm]].
/// Fractional seconds are truncated. Missing offsets use default_offset.
inline std::optional<Timestamp> parse_iso8601(std::string_view s, std::int64_t default_offset = 0) {
  using namespace std::chrono;
  s = trim(s);
  int y = 0, mo = 0, d = 0, hh = 0, mi = 0, ss = 0;
  if (!detail::parse_fixed_digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' ||
      !detail::parse_fixed_digits(s, 5, 2, mo) || s[7] != '-' ||
      !detail::parse_fixed_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  std::size_t pos = 10;
  std::int64_t offset = default_offset;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == 't' || s[pos] == ' ')) {
    ++pos;
    if (!detail::parse_fixed_digits(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
        !detail::parse_fixed_digits(s, pos + 3, 2, mi)) {
      return std::nullopt;
    }
    pos += 5;
    if (pos < s.size() && s[pos] == ':') {
      if (!detail::parse_fixed_digits(s, pos + 1, 2, ss)) return std::nullopt;
      pos += 3;
      if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
        ++pos;
        const auto start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) return std::nullopt;
      }
    }
    if (hh > 23 || mi > 59 || ss > 60) return std::nullopt;
    if (pos < s.size()) {
      if (s[pos] == 'Z' || s[pos] == 'z') {
        offset = 0;
        ++pos;
      } else if (s[pos] == '+' || s[pos] == '-') {
        const int sign = s[pos] == '-' ? -1 : 1;
        int oh = 0, om = 0;
        if (!detail::parse_fixed_digits(s, pos + 1, 2, oh)) return std::nullopt;
        pos += 3;
        if (pos < s.size() && s[pos] == ':') ++pos;
        if (pos < s.size()) {
          if (!detail::parse_fixed_digits(s, pos, 2, om)) return std::nullopt;
          pos += 2;
        }
        if (oh > 23 || om > 59) return std::nullopt;
        offset = sign * (oh * 3600 + om * 60);
      }
    }
  }
  if (pos != s.size()) return std::nullopt;
  const std::int64_t days_since = sys_days{ymd}.time_since_epoch().count();
  return days_since * 86400 + hh * 3600 + mi * 60 + ss - offset;
}

/// Parses one timestamp field into UTC epoch seconds.
inline std::optional<Timestamp> parse_timestamp(std::string_view s, TimestampFormat format,
                                                std::int64_t default_offset = 0) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  switch (format) {
    case TimestampFormat::iso8601:
      return parse_iso8601(s, default_offset);
    case TimestampFormat::epoch_seconds:
      if (detail::parse_int64(s, v)) return v;
      break;
    case TimestampFormat::epoch_millis:
      if (detail::parse_int64(s, v)) return detail::floor_div(v, 1000);
      break;
  }
  // Decimal epoch values are floored to whole seconds.
  double d = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(d)) return std::nullopt;
  if (format == TimestampFormat::epoch_millis) d /= 1000.0;
  if (std::abs(d) > 9.0e15) return std::nullopt;
  return static_cast<Timestamp>(std::floor(d));
}

// ---------------------------------------------------------------------------
// Delimited text

/// Splits one record. Double-quoted fields may contain the delimiter and
/// doubled quotes. Returns nullopt on an unterminated quote.
inline std::optional<std::vector<std::string>> split_delimited(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && trim(cur).empty() && !was_quoted) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

namespace detail {

inline std::string casefold(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct RowFields {
  std::string source;
  std::string target;
  std::string timestamp;
  std::optional<std::string> weight;
  bool timestamp_is_number = false;
};

// Validates one row's raw fields. Returns the event or a rejection reason.
inline std::variant<TemporalEvent, std::string> make_event(RowFields raw, const IngestConfig& cfg) {
  auto source = std::string(trim(raw.source));
  auto target = std::string(trim(raw.target));
  if (source.empty()) return std::string("empty source");
  if (target.empty()) return std::string("empty target");
  if (cfg.casefold_ids) {
    source = casefold(std::move(source));
    target = casefold(std::move(target));
  }
  const auto format = raw.timestamp_is_number && cfg.timestamp_format == TimestampFormat::iso8601
                          ? TimestampFormat::epoch_seconds
                          : cfg.timestamp_format;
  const auto ts = parse_timestamp(raw.timestamp, format, cfg.default_utc_offset);
  if (!ts) return "unparsable timestamp '" + raw.timestamp + "'";
  std::optional<double> weight;
  if (raw.weight && !trim(*raw.weight).empty()) {
    const auto w = trim(*raw.weight);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || p != w.data() + w.size() || !std::isfinite(v) || v <= 0.0) {
      return "invalid weight '" + std::string(w) + "'";
    }
    weight = v;
  }
  return TemporalEvent{ActorId(source), ActorId(target), *ts, weight};
}

class Accumulator {
 public:
  explicit Accumulator(IngestResult& out) : out_(out) {}

  void row(std::size_t line, std::variant<TemporalEvent, std::string> parsed) {
    auto& d = out_.diagnostics;
    ++d.rows_read;
    if (auto* reason = std::get_if<std::string>(&parsed)) {
      d.malformed.push_back({line, std::move(*reason)});
      return;
    }
    auto& ev = std::get<TemporalEvent>(parsed);
    ++d.rows_accepted;
    if (ev.source == ev.target) ++d.self_loops_seen;
    if (!seen_.emplace(ev.source.str(), ev.target.str(), ev.timestamp).second) ++d.duplicate_events;
    out_.events.push_back(std::move(ev));
  }

  void malformed(std::size_t line, std::string reason) { row(line, std::move(reason)); }

  void finish() const {
    const auto& d = out_.diagnostics;
    if (d.rows_read > 0 && 2 * d.malformed.size() > d.rows_read) {
      std::string msg = std::to_string(d.malformed.size()) + " of " + std::to_string(d.rows_read) +
                        " rows are malformed (check delimiter, columns and timestamp format)";
      msg += "; first: line " + std::to_string(d.malformed.front().line) + ": " + d.malformed.front().reason;
      throw IngestError(msg);
    }
  }

 private:
  IngestResult& out_;
  std::set<std::tuple<std::string, std::string, Timestamp>> seen_;
};

inline std::size_t resolve_column(const ColumnRef& ref, const std::vector<std::string>& header,
                                  bool has_header) {
  if (const auto* pos = std::get_if<std::size_t>(&ref)) return *pos;
  const auto& name = std::get<std::string>(ref);
  if (!has_header) throw ConfigError("column '" + name + "' is named but the input has no header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw IngestError("input header has no column named '" + name + "'");
}

inline IngestResult parse_csv(std::istream& in, const IngestConfig& cfg) {
  IngestResult result;
  Accumulator acc(result);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  bool header_done = !cfg.has_header;
  std::size_t c_src = 0, c_dst = 0, c_ts = 0;
  std::optional<std::size_t> c_w;
  auto resolve = [&] {
    c_src = resolve_column(cfg.columns.source, header, cfg.has_header);
    c_dst = resolve_column(cfg.columns.target, header, cfg.has_header);
    c_ts = resolve_column(cfg.columns.timestamp, header, cfg.has_header);
    if (cfg.columns.weight) c_w = resolve_column(*cfg.columns.weight, header, cfg.has_header);
  };
  if (header_done) resolve();

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_delimited(line, cfg.delimiter);
    if (!header_done) {
      if (!fields) throw IngestError("unterminated quote in header on line " + std::to_string(lineno));
      header = std::move(*fields);
      header_done = true;
      resolve();
      continue;
    }
    if (!fields) {
      acc.malformed(lineno, "unterminated quote");
      continue;
    }
    const std::size_t need = std::max({c_src, c_dst, c_ts, c_w.value_or(0)}) + 1;
    if (fields->size() < need) {
      acc.malformed(lineno, "expected at least " + std::to_string(need) + " fields, found " +
                                std::to_string(fields->size()));
      continue;
    }
    RowFields raw{(*fields)[c_src], (*fields)[c_dst], (*fields)[c_ts], std::nullopt, false};
    if (c_w) raw.weight = (*fields)[*c_w];
    acc.row(lineno, make_event(std::move(raw), cfg));
  }
  if (in.bad()) throw IngestError("read error while parsing input");
  acc.finish();
  return result;
}

inline std::optional<std::string> json_field(const nlohmann::json& obj, const std::string& key,
                                             bool& is_number) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  is_number = it->is_number();
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
  if (it->is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << it->get<double>();
    return os.str();
  }
  return std::nullopt;
}

inline IngestResult parse_jsonl(std::istream& in, const IngestConfig& cfg) {
  const auto name_of = [](const ColumnRef& ref) -> std::string {
    if (const auto* s = std::get_if<std::string>(&ref)) return *s;
    throw ConfigError("JSONL input needs named columns, got position " + describe(ref));
  };
  const std::string k_src = name_of(cfg.columns.source);
  const std::string k_dst = name_of(cfg.columns.target);
  const std::string k_ts = name_of(cfg.columns.timestamp);
  const std::optional<std::string> k_w =
      cfg.columns.weight ? std::optional(name_of(*cfg.columns.weight)) : std::nullopt;

  IngestResult result;
  Accumulator acc(result);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      acc.malformed(lineno, "not a JSON object");
      continue;
    }
    bool num = false;
    const auto src = json_field(obj, k_src, num);
    const auto dst = json_field(obj, k_dst, num);
    bool ts_num = false;
    const auto ts = json_field(obj, k_ts, ts_num);
    if (!src) { acc.malformed(lineno, "missing '" + k_src + "'"); continue; }
    if (!dst) { acc.malformed(lineno, "missing '" + k_dst + "'"); continue; }
    if (!ts) { acc.malformed(lineno, "missing '" + k_ts + "'"); continue; }
    RowFields raw{*src, *dst, *ts, std::nullopt, ts_num};
    if (k_w) raw.weight = json_field(obj, *k_w, num);
    acc.row(lineno, make_event(std::move(raw), cfg));
  }
  if (in.bad()) throw IngestError("read error while parsing input");
  acc.finish();
  return result;
}

}  // namespace detail

/// Reads a timestamped edge list. Malformed rows are skipped and recorded;
/// more than half malformed is treated as a configuration mistake.
inline IngestResult parse_edge_list(std::istream& in, const IngestConfig& cfg) {
  if (!in) throw IngestError("input stream is not readable");
  return cfg.format == InputFormat::csv ? detail::parse_csv(in, cfg) : detail::parse_jsonl(in, cfg);
}

inline const TemporalEdgeList& validate(const TemporalEdgeList& events) {
  if (events.empty()) throw IngestError("no events to analyze");
  return events;
}

/// Writes `source,target,timestamp` (plus `weight` when any event has one)
/// with a header, quoting fields that need it.
inline void write_canonical_csv(std::ostream& out, const TemporalEdgeList& events) {
  const auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos && trim(s) == s) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  };
  bool weighted = false;
  for (const auto& e : events) weighted = weighted || e.weight.has_value();
  out << "source,target,timestamp" << (weighted ? ",weight" : "") << '\n';
  for (const auto& e : events) {
    out << quote(e.source.str()) << ',' << quote(e.target.str()) << ',' << e.timestamp;
    if (weighted) {
      out << ',';
      if (e.weight) {
        char buf[32];
        const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, *e.weight);
        out << std::string_view(buf, static_cast<std::size_t>(p - buf));
      }
    }
    out << '\n';
  }
}

}  // namespace lsndyn
