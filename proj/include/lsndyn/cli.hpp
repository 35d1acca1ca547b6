#pragma once

#include <charconv>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"

#include "lsndyn/errors.hpp"
#include "lsndyn/ingest.hpp"
#include "lsndyn/report.hpp"
#include "lsndyn/temporal.hpp"

namespace lsndyn {

struct CliRequest {
  RunConfig config;
  std::optional<std::string> help;  // set when --help was requested
};

/// "+HH:MM", "-HHMM", "+HH", "Z", "UTC" or "0" to seconds east of UTC.
inline std::int64_t parse_utc_offset(std::string_view s) {
  s = trim(s);
  if (s == "0" || s == "Z" || s == "UTC" || s == "utc") return 0;
  if (s.size() < 3 || (s[0] != '+' && s[0] != '-')) {
    throw ConfigError("malformed --tz-offset '" + std::string(s) + "' (expected +HH:MM)");
  }
  const auto fail = [&] { return ConfigError("malformed --tz-offset '" + std::string(s) + "'"); };
  int hh = 0, mm = 0;
  if (!detail::parse_fixed_digits(s, 1, 2, hh)) throw fail();
  std::size_t pos = 3;
  if (pos < s.size() && s[pos] == ':') ++pos;
  if (pos < s.size()) {
    if (!detail::parse_fixed_digits(s, pos, 2, mm) || pos + 2 != s.size()) throw fail();
  }
  if (hh > 23 || mm > 59) throw fail();
  return (s[0] == '-' ? -1 : 1) * (hh * 3600 + mm * 60);
}

/// Reads one boundary per line (epoch seconds or ISO-8601); blank lines
/// and lines starting with '#' are skipped.
inline std::vector<Timestamp> read_bounds_file(const std::string& path, std::int64_t default_offset) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open window bounds file '" + path + "'");
  std::vector<Timestamp> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto ts = parse_timestamp(t, TimestampFormat::epoch_seconds);
    if (!ts) ts = parse_iso8601(t, default_offset);
    if (!ts) {
      throw ConfigError("malformed boundary '" + std::string(t) + "' at " + path + ":" + std::to_string(lineno));
    }
    out.push_back(*ts);
  }
  return out;
}

/// month | week | day | fixed:<seconds>[@<origin>] | bounds:<file>
inline WindowPlan parse_window_spec(std::string_view spec, std::int64_t utc_offset) {
  spec = trim(spec);
  if (spec == "month") return Calendar{CalendarUnit::month, utc_offset};
  if (spec == "week") return Calendar{CalendarUnit::week, utc_offset};
  if (spec == "day") return Calendar{CalendarUnit::day, utc_offset};
  const auto bad = [&] { return ConfigError("malformed --window '" + std::string(spec) + "'"); };
  if (spec.starts_with("fixed:")) {
    auto rest = spec.substr(6);
    FixedDuration fixed;
    const auto at = rest.find('@');
    if (at != std::string_view::npos) {
      const auto origin = parse_timestamp(rest.substr(at + 1), TimestampFormat::epoch_seconds);
      if (!origin) throw bad();
      fixed.origin = *origin;
      rest = rest.substr(0, at);
    }
    if (!detail::parse_int64(rest, fixed.length) || fixed.length <= 0) throw bad();
    return fixed;
  }
  if (spec.starts_with("bounds:")) {
    const auto path = std::string(spec.substr(7));
    if (path.empty()) throw bad();
    return ExplicitBounds{read_bounds_file(path, utc_offset)};
  }
  throw bad();
}

inline std::vector<MetricKind> parse_metric_list(std::string_view list) {
  std::vector<MetricKind> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const auto item = trim(list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos));
    pos = comma == std::string_view::npos ? list.size() + 1 : comma + 1;
    if (item.empty()) continue;
    const auto kind = parse_metric_kind(item);
    if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
  }
  if (out.empty()) throw ConfigError("--metrics needs at least one metric");
  return out;
}

namespace detail {

struct RawOptions {
  std::string input;
  std::string format = "csv";
  std::string delimiter = ",";
  std::string columns;
  std::string timestamp_format = "epoch";
  bool no_header = false;
  bool casefold = false;
  std::string window = "month";
  std::string tz_offset = "0";
  bool directed = false;
  std::string metrics = "degree,closeness,betweenness";
  std::string closeness = "harmonic";
  std::string norm_base = "per-network";
  std::string ddn_mode = "eq6";
  std::size_t top = 5;
  std::string out;
  std::string output_format = "text";
  bool full = false;
};

inline void add_options(CLI::App& sub, RawOptions& o) {
  sub.add_option("--input,-i", o.input, "Timestamped edge list to analyze")->required();
  sub.add_option("--format", o.format, "Input format: csv | jsonl")->capture_default_str();
  sub.add_option("--delimiter", o.delimiter, "CSV field delimiter (one character)")->capture_default_str();
  sub.add_option("--columns", o.columns,
                 "Column mapping, e.g. source=0,target=1,timestamp=2[,weight=3] or names "
                 "(default: positions 0,1,2 for csv; keys source,target,timestamp for jsonl)");
  sub.add_option("--timestamp-format", o.timestamp_format,
                 "Timestamp encoding: epoch | epoch-millis | iso8601")->capture_default_str();
  sub.add_flag("--no-header", o.no_header, "CSV input has no header row");
  sub.add_flag("--casefold", o.casefold, "Lower-case actor labels before analysis (default off)");
  sub.add_option("--window,-w", o.window,
                 "Window plan: month | week | day | fixed:<seconds>[@<origin>] | bounds:<file>. "
                 "Windows are half-open [start,end); empty windows are kept. fixed: origin defaults "
                 "to the earliest event")->capture_default_str();
  sub.add_option("--tz-offset", o.tz_offset,
                 "Fixed UTC offset (+HH:MM) for calendar windows and ISO-8601 values without an "
                 "offset (default UTC)")->capture_default_str();
  sub.add_flag("--directed", o.directed,
               "Treat edges as directed (default undirected). Closeness then uses outgoing "
               "distances and betweenness directed shortest paths");
  sub.add_option("--metrics,-m", o.metrics,
                 "Comma-separated metrics: degree, in_degree, out_degree, closeness, betweenness "
                 "(in/out degree need --directed)")->capture_default_str();
  sub.add_option("--closeness", o.closeness,
                 "Closeness variant for disconnected graphs: harmonic | wf (Wasserman-Faust "
                 "corrected)")->capture_default_str();
  sub.add_option("--norm-base", o.norm_base,
                 "Centrality normalization base: per-network (each network by its own size) | "
                 "aggregated (every network by the aggregated actor count)")->capture_default_str();
  sub.add_option("--ddn-mode", o.ddn_mode,
                 "Network dynamicity: eq6 (sum of actor contributions, 1 - DDA* + mean DDA) | "
                 "mean (mean DDA)")->capture_default_str();
  sub.add_option("--top,-k", o.top, "Number of actors in the top-k table")->capture_default_str();
  sub.add_option("--out,-o", o.out,
                 "Output file (json/text) or directory (csv); standard output when omitted");
  sub.add_option("--output-format,-f", o.output_format, "Report format: text | json | csv")
      ->capture_default_str();
}

inline RunConfig to_config(Command command, const RawOptions& o) {
  RunConfig cfg;
  cfg.command = command;
  cfg.input_path = o.input;
  if (o.format == "csv") cfg.ingest.format = InputFormat::csv;
  else if (o.format == "jsonl") cfg.ingest.format = InputFormat::jsonl;
  else throw ConfigError("unknown input format '" + o.format + "'");
  if (o.delimiter == "\\t" || o.delimiter == "tab") cfg.ingest.delimiter = '\t';
  else if (o.delimiter.size() == 1) cfg.ingest.delimiter = o.delimiter[0];
  else throw ConfigError("--delimiter must be a single character, got '" + o.delimiter + "'");
  cfg.ingest.columns = o.columns.empty() ? (cfg.ingest.format == InputFormat::csv ? ColumnMap::positional()
                                                                                  : ColumnMap::named())
                                         : parse_column_map(o.columns);
  cfg.ingest.timestamp_format = parse_timestamp_format(o.timestamp_format);
  cfg.ingest.has_header = !o.no_header;
  cfg.ingest.casefold_ids = o.casefold;
  cfg.ingest.default_utc_offset = parse_utc_offset(o.tz_offset);
  cfg.window_spec = o.window;
  cfg.window = parse_window_spec(o.window, cfg.ingest.default_utc_offset);
  cfg.directedness = o.directed ? Directedness::directed : Directedness::undirected;
  cfg.metrics = parse_metric_list(o.metrics);
  for (auto k : cfg.metrics) {
    if ((k == MetricKind::in_degree || k == MetricKind::out_degree) && !o.directed) {
      throw ConfigError(std::string(to_string(k)) + " requires --directed");
    }
  }
  cfg.closeness = parse_closeness_variant(o.closeness);
  cfg.norm_base = parse_normalization_base(o.norm_base);
  cfg.ddn_mode = parse_ddn_mode(o.ddn_mode);
  if (o.top < 1) throw ConfigError("--top must be at least 1");
  cfg.top_k = o.top;
  if (!o.out.empty()) cfg.out_path = o.out;
  cfg.output_format = parse_output_format(o.output_format);
  cfg.full = o.full;
  return cfg;
}

}  // namespace detail

/// Parses a full argument vector (args[0] is the program name). Usage
/// problems raise ConfigError naming the offending token.
inline CliRequest parse_cli(const std::vector<std::string>& args) {
  CLI::App app{"Quantify the dynamicity of longitudinal social networks", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  detail::RawOptions raw;
  struct Sub {
    Command command;
    const char* description;
  };
  const Sub subs[] = {
      {Command::compute, "Full report: top-k actors, per-window and network dynamicity"},
      {Command::actors, "Top-k actors by dynamicity only"},
      {Command::windows, "Per-window dynamicity only"},
      {Command::network, "Network-level dynamicity only"},
      {Command::matrix, "Actor x window dynamicity matrix"},
  };
  std::vector<std::pair<CLI::App*, Command>> registered;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(std::string(to_string(s.command)), s.description);
    detail::add_options(*sub, raw);
    if (s.command == Command::compute) {
      sub->add_flag("--full", raw.full, "Also emit every actor's DDA/contribution and the actor x window matrix");
    }
    registered.emplace_back(sub, s.command);
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back(kToolName);
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    for (const auto& [sub, _] : registered) {
      if (sub->parsed()) return {RunConfig{}, sub->help()};
    }
    return {RunConfig{}, app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return {RunConfig{}, app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion&) {
    return {RunConfig{}, std::string(kToolName) + " " + kToolVersion + "\n"};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [sub, command] : registered) {
    if (sub->parsed()) return {detail::to_config(command, raw), std::nullopt};
  }
  throw ConfigError("a subcommand is required");
}

}  // namespace lsndyn
