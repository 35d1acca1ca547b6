#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsndyn/centrality.hpp"
#include "lsndyn/dynamicity.hpp"
#include "lsndyn/errors.hpp"
#include "lsndyn/ingest.hpp"
#include "lsndyn/temporal.hpp"

namespace lsndyn {

inline constexpr const char* kToolName = "lsndyn";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "lsndyn.report/1";

enum class Command { compute, actors, windows, network, matrix };
enum class OutputFormat { csv, json, text };

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::compute: return "compute";
    case Command::actors: return "actors";
    case Command::windows: return "windows";
    case Command::network: return "network";
    case Command::matrix: return "matrix";
  }
  return "?";
}

inline std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::text: return "text";
  }
  return "?";
}

inline OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "text" || s == "txt") return OutputFormat::text;
  throw ConfigError("unknown output format '" + std::string(s) + "'");
}

struct RunConfig {
  Command command = Command::compute;
  std::string input_path;
  IngestConfig ingest;
  std::string window_spec = "month";  // as given, echoed in metadata
  WindowPlan window = Calendar{CalendarUnit::month, 0};
  Directedness directedness = Directedness::undirected;
  std::vector<MetricKind> metrics{MetricKind::degree, MetricKind::closeness,
                                  MetricKind::betweenness};
  ClosenessVariant closeness = ClosenessVariant::harmonic;
  NormalizationBase norm_base = NormalizationBase::per_network;
  DdnMode ddn_mode = DdnMode::eq6_literal;
  std::size_t top_k = 5;
  OutputFormat output_format = OutputFormat::text;
  std::optional<std::string> out_path;
  bool full = false;  // compute: also emit full DDA vectors and matrices

  MetricSpec spec_for(MetricKind kind) const { return {kind, closeness, norm_base}; }
};

// ---------------------------------------------------------------------------
// Report model

struct ReportSections {
  bool top = false;
  bool windows = false;
  bool network = false;
  bool actors = false;
  bool matrix = false;

  static ReportSections for_command(Command c, bool full) {
    switch (c) {
      case Command::compute: return {true, true, true, full, full};
      case Command::actors: return {true, false, false, false, false};
      case Command::windows: return {false, true, false, false, false};
      case Command::network: return {false, false, true, false, false};
      case Command::matrix: return {false, false, false, false, true};
    }
    return {};
  }
  friend bool operator==(const ReportSections&, const ReportSections&) = default;
};

struct WindowInfo {
  std::size_t index = 0;  // one-based
  Timestamp start = 0;
  Timestamp end = 0;
  std::size_t events = 0;
  std::size_t actors = 0;
  friend bool operator==(const WindowInfo&, const WindowInfo&) = default;
};

struct ReportMetadata {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<WindowInfo> windows;
  std::size_t rows_read = 0;
  std::size_t rows_accepted = 0;
  std::size_t rows_malformed = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges_collapsed = 0;
  std::size_t aggregated_edges = 0;
  friend bool operator==(const ReportMetadata&, const ReportMetadata&) = default;
};

struct ActorRow {
  std::string actor_id;
  double dda = 0.0;
  double contribution = 0.0;
  friend bool operator==(const ActorRow&, const ActorRow&) = default;
};

struct MatrixRow {
  std::string actor_id;
  std::vector<double> values;
  friend bool operator==(const MatrixRow&, const MatrixRow&) = default;
};

struct TopRow {
  std::size_t rank = 0;
  std::string actor_id;
  double dda = 0.0;
  friend bool operator==(const TopRow&, const TopRow&) = default;
};

struct MetricReport {
  std::string metric;
  std::vector<TopRow> top;
  std::vector<std::optional<double>> window_ddn;
  std::string ddn_mode;
  double ddn = 0.0;
  double ddn_eq6 = 0.0;
  double ddn_mean = 0.0;
  double dda_star = 0.0;
  std::vector<ActorRow> actors;
  std::vector<MatrixRow> matrix;
  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

struct DynamicityReport {
  ReportMetadata metadata;
  ReportSections sections;
  std::vector<MetricReport> metrics;
  friend bool operator==(const DynamicityReport&, const DynamicityReport&) = default;
};

// ---------------------------------------------------------------------------
// Number and time formatting

/// 12 significant digits, shortest of %g style.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Rounds to the value that format_number prints, so serialized and
/// in-memory report values agree exactly.
inline double round12(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

inline std::string format_utc(Timestamp t) {
  using namespace std::chrono;
  const auto day = detail::floor_div(t, 86400);
  const auto secs = t - day * 86400;
  const year_month_day ymd{sys_days{days{day}}};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                static_cast<long long>(secs % 60));
  return buf;
}

// ---------------------------------------------------------------------------
// Running

inline std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
  std::string metrics;
  for (auto k : cfg.metrics) metrics += (metrics.empty() ? "" : ",") + std::string(to_string(k));
  std::string columns = "source=" + describe(cfg.ingest.columns.source) +
                        ",target=" + describe(cfg.ingest.columns.target) +
                        ",timestamp=" + describe(cfg.ingest.columns.timestamp);
  if (cfg.ingest.columns.weight) columns += ",weight=" + describe(*cfg.ingest.columns.weight);
  return {
      {"input", cfg.input_path},
      {"input_format", std::string(to_string(cfg.ingest.format))},
      {"delimiter", std::string(1, cfg.ingest.delimiter)},
      {"header", cfg.ingest.has_header ? "true" : "false"},
      {"columns", columns},
      {"timestamp_format", std::string(to_string(cfg.ingest.timestamp_format))},
      {"casefold_ids", cfg.ingest.casefold_ids ? "true" : "false"},
      {"tz_offset_seconds", std::to_string(cfg.ingest.default_utc_offset)},
      {"window", cfg.window_spec},
      {"directedness", std::string(to_string(cfg.directedness))},
      {"metrics", metrics},
      {"closeness", std::string(to_string(cfg.closeness))},
      {"norm_base", std::string(to_string(cfg.norm_base))},
      {"ddn_mode", std::string(to_string(cfg.ddn_mode))},
      {"top", std::to_string(cfg.top_k)},
  };
}

/// Full pipeline over already-parsed events.
inline DynamicityReport run_compute(const RunConfig& cfg, const IngestResult& ingested) {
  if (cfg.metrics.empty()) throw ConfigError("at least one metric is required");
  if (cfg.top_k < 1) throw ConfigError("--top must be at least 1");
  validate(ingested.events);

  const auto sliced = slice(ingested.events, cfg.window, cfg.directedness);
  if (sliced.n() == 0) throw IngestError("no actors: every event is a self-loop");
  const auto presence = presence_matrix(sliced);
  const auto alpha = alpha_weights(presence);

  DynamicityReport rep;
  rep.sections = ReportSections::for_command(cfg.command, cfg.full);
  auto& meta = rep.metadata;
  meta.command = std::string(to_string(cfg.command));
  meta.config = config_echo(cfg);
  meta.m = sliced.m();
  meta.n = sliced.n();
  for (std::size_t j = 0; j < sliced.m(); ++j) {
    const auto& sin = sliced.sins[j];
    meta.windows.push_back({j + 1, sin.window.start, sin.window.end, sin.event_count,
                            presence.count_in_window(j)});
  }
  meta.rows_read = ingested.diagnostics.rows_read;
  meta.rows_accepted = ingested.diagnostics.rows_accepted;
  meta.rows_malformed = ingested.diagnostics.malformed.size();
  meta.self_loops_dropped = sliced.self_loops_dropped;
  meta.duplicate_edges_collapsed = sliced.duplicates_collapsed;
  meta.aggregated_edges = sliced.aggregated.edge_count();

  for (auto kind : cfg.metrics) {
    const auto spec = cfg.spec_for(kind);
    if ((kind == MetricKind::in_degree || kind == MetricKind::out_degree) &&
        cfg.directedness != Directedness::directed) {
      throw ConfigError(std::string(to_string(kind)) + " requires --directed");
    }
    const auto obs = observe(sliced, spec);
    const auto mat = actor_window_dynamicity(obs, alpha);
    const auto ad = actor_dynamicity(mat);
    const auto wd = window_dynamicity(mat, presence);
    const auto eq6 = network_dynamicity(ad, sliced.n(), DdnMode::eq6_literal);
    const auto mean = network_dynamicity(ad, sliced.n(), DdnMode::mean_dda);

    MetricReport mr;
    mr.metric = spec.name();
    ActorDynamicity rounded = ad;
    for (auto& d : rounded.dda) d = round12(d);
    rounded.dda_star = round12(ad.dda_star);
    if (rep.sections.top) {
      const auto top = rank_actors(rounded, cfg.top_k);
      for (std::size_t r = 0; r < top.size(); ++r) mr.top.push_back({r + 1, top[r].actor.str(), top[r].dda});
    }
    if (rep.sections.windows) {
      for (const auto& v : wd.ddn) mr.window_ddn.push_back(v ? std::optional(round12(*v)) : std::nullopt);
    }
    if (rep.sections.network) {
      mr.ddn_mode = std::string(to_string(cfg.ddn_mode));
      mr.ddn_eq6 = round12(eq6.ddn);
      mr.ddn_mean = round12(mean.ddn);
      mr.ddn = cfg.ddn_mode == DdnMode::eq6_literal ? mr.ddn_eq6 : mr.ddn_mean;
      mr.dda_star = rounded.dda_star;
    }
    if (rep.sections.actors) {
      for (std::size_t i = 0; i < ad.n(); ++i) {
        mr.actors.push_back({ad.actors[i].str(), rounded.dda[i], round12(eq6.contributions[i])});
      }
    }
    if (rep.sections.matrix) {
      for (std::size_t i = 0; i < mat.actors.size(); ++i) {
        MatrixRow row{mat.actors[i].str(), {}};
        for (std::size_t j = 0; j < mat.windows; ++j) row.values.push_back(round12(mat.at(i, j)));
        mr.matrix.push_back(std::move(row));
      }
    }
    rep.metrics.push_back(std::move(mr));
  }
  return rep;
}

inline DynamicityReport run_compute(const RunConfig& cfg, std::istream& input) {
  return run_compute(cfg, parse_edge_list(input, cfg.ingest));
}

/// Reads cfg.input_path and runs the pipeline.
inline DynamicityReport run_compute(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw ConfigError("no input path given");
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw IngestError("cannot open input '" + cfg.input_path + "'");
  try {
    return run_compute(cfg, in);
  } catch (const IngestError& e) {
    throw IngestError(cfg.input_path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json report_to_json(const DynamicityReport& rep) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema"] = kReportSchema;
  const auto& md = rep.metadata;
  json meta;
  meta["tool"] = md.tool;
  meta["version"] = md.version;
  meta["command"] = md.command;
  json cfg = json::object();
  for (const auto& [k, v] : md.config) cfg[k] = v;
  meta["config"] = cfg;
  meta["m"] = md.m;
  meta["n"] = md.n;
  json windows = json::array();
  for (const auto& w : md.windows) {
    windows.push_back({{"window", w.index}, {"start", w.start}, {"end", w.end},
                       {"events", w.events}, {"actors", w.actors}});
  }
  meta["windows"] = windows;
  meta["ingest"] = {{"rows_read", md.rows_read},
                    {"rows_accepted", md.rows_accepted},
                    {"rows_malformed", md.rows_malformed},
                    {"self_loops_dropped", md.self_loops_dropped},
                    {"duplicate_edges_collapsed", md.duplicate_edges_collapsed},
                    {"aggregated_edges", md.aggregated_edges}};
  doc["metadata"] = meta;

  json metrics = json::array();
  for (const auto& mr : rep.metrics) {
    json m;
    m["metric"] = mr.metric;
    if (rep.sections.top) {
      json top = json::array();
      for (const auto& r : mr.top) top.push_back({{"rank", r.rank}, {"actor_id", r.actor_id}, {"dda", r.dda}});
      m["top"] = top;
    }
    if (rep.sections.windows) {
      json wins = json::array();
      for (std::size_t j = 0; j < mr.window_ddn.size(); ++j) {
        json v = mr.window_ddn[j] ? json(*mr.window_ddn[j]) : json(nullptr);
        wins.push_back({{"window", j + 1}, {"ddn", v}});
      }
      m["windows"] = wins;
    }
    if (rep.sections.network) {
      m["network"] = {{"mode", mr.ddn_mode}, {"ddn", mr.ddn}, {"ddn_eq6", mr.ddn_eq6},
                      {"ddn_mean", mr.ddn_mean}, {"dda_star", mr.dda_star}};
    }
    if (rep.sections.actors) {
      json rows = json::array();
      for (const auto& a : mr.actors) {
        rows.push_back({{"actor_id", a.actor_id}, {"dda", a.dda}, {"contribution", a.contribution}});
      }
      m["actors"] = rows;
    }
    if (rep.sections.matrix) {
      json rows = json::array();
      for (const auto& r : mr.matrix) rows.push_back({{"actor_id", r.actor_id}, {"values", r.values}});
      m["matrix"] = rows;
    }
    metrics.push_back(m);
  }
  doc["metrics"] = metrics;
  return doc;
}

inline DynamicityReport report_from_json(const nlohmann::ordered_json& doc) {
  if (doc.value("schema", "") != kReportSchema) throw ConfigError("not a " + std::string(kReportSchema) + " document");
  DynamicityReport rep;
  const auto& meta = doc.at("metadata");
  auto& md = rep.metadata;
  md.tool = meta.at("tool").get<std::string>();
  md.version = meta.at("version").get<std::string>();
  md.command = meta.at("command").get<std::string>();
  for (const auto& [k, v] : meta.at("config").items()) md.config.emplace_back(k, v.get<std::string>());
  md.m = meta.at("m").get<std::size_t>();
  md.n = meta.at("n").get<std::size_t>();
  for (const auto& w : meta.at("windows")) {
    md.windows.push_back({w.at("window").get<std::size_t>(), w.at("start").get<Timestamp>(),
                          w.at("end").get<Timestamp>(), w.at("events").get<std::size_t>(),
                          w.at("actors").get<std::size_t>()});
  }
  const auto& ing = meta.at("ingest");
  md.rows_read = ing.at("rows_read").get<std::size_t>();
  md.rows_accepted = ing.at("rows_accepted").get<std::size_t>();
  md.rows_malformed = ing.at("rows_malformed").get<std::size_t>();
  md.self_loops_dropped = ing.at("self_loops_dropped").get<std::size_t>();
  md.duplicate_edges_collapsed = ing.at("duplicate_edges_collapsed").get<std::size_t>();
  md.aggregated_edges = ing.at("aggregated_edges").get<std::size_t>();

  rep.sections = {};
  for (const auto& m : doc.at("metrics")) {
    MetricReport mr;
    mr.metric = m.at("metric").get<std::string>();
    if (m.contains("top")) {
      rep.sections.top = true;
      for (const auto& r : m["top"]) {
        mr.top.push_back({r.at("rank").get<std::size_t>(), r.at("actor_id").get<std::string>(),
                          r.at("dda").get<double>()});
      }
    }
    if (m.contains("windows")) {
      rep.sections.windows = true;
      for (const auto& w : m["windows"]) {
        const auto& v = w.at("ddn");
        mr.window_ddn.push_back(v.is_null() ? std::nullopt : std::optional(v.get<double>()));
      }
    }
    if (m.contains("network")) {
      rep.sections.network = true;
      const auto& nw = m["network"];
      mr.ddn_mode = nw.at("mode").get<std::string>();
      mr.ddn = nw.at("ddn").get<double>();
      mr.ddn_eq6 = nw.at("ddn_eq6").get<double>();
      mr.ddn_mean = nw.at("ddn_mean").get<double>();
      mr.dda_star = nw.at("dda_star").get<double>();
    }
    if (m.contains("actors")) {
      rep.sections.actors = true;
      for (const auto& a : m["actors"]) {
        mr.actors.push_back({a.at("actor_id").get<std::string>(), a.at("dda").get<double>(),
                             a.at("contribution").get<double>()});
      }
    }
    if (m.contains("matrix")) {
      rep.sections.matrix = true;
      for (const auto& r : m["matrix"]) {
        mr.matrix.push_back({r.at("actor_id").get<std::string>(), r.at("values").get<std::vector<double>>()});
      }
    }
    rep.metrics.push_back(std::move(mr));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Text tables

namespace detail {

class TextTable {
 public:
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void write(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t c = 0; c < r.size(); ++c) {
        line += r[c];
        if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string metric_label(const DynamicityReport& rep, const std::string& metric) {
  if (metric != "closeness") return metric;
  for (const auto& [k, v] : rep.metadata.config) {
    if (k == "closeness") return metric + " (" + v + ")";
  }
  return metric;
}

inline std::string config_value(const DynamicityReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.metadata.config) {
    if (k == key) return v;
  }
  return {};
}

}  // namespace detail

inline void write_text(std::ostream& out, const DynamicityReport& rep) {
  const auto& md = rep.metadata;
  out << "LONGITUDINAL NETWORK DYNAMICITY REPORT\n";
  out << md.tool << ' ' << md.version << " (" << md.command << ")\n\n";
  {
    detail::TextTable t;
    for (const auto& [k, v] : md.config) t.row({k, v});
    t.row({"windows (m)", std::to_string(md.m)});
    t.row({"actors (n)", std::to_string(md.n)});
    t.row({"aggregated edges", std::to_string(md.aggregated_edges)});
    t.row({"rows read/accepted/malformed", std::to_string(md.rows_read) + "/" +
                                                std::to_string(md.rows_accepted) + "/" +
                                                std::to_string(md.rows_malformed)});
    t.row({"self-loops dropped", std::to_string(md.self_loops_dropped)});
    t.row({"duplicate edges collapsed", std::to_string(md.duplicate_edges_collapsed)});
    t.write(out);
  }

  if (rep.sections.top) {
    std::size_t rows = 0;
    for (const auto& mr : rep.metrics) rows = std::max(rows, mr.top.size());
    out << "\nTOP-" << detail::config_value(rep, "top") << " ACTORS SHOWING HIGHER DYNAMICITY (DDA)\n";
    detail::TextTable t;
    std::vector<std::string> group{""}, head{"Rank"};
    for (const auto& mr : rep.metrics) {
      group.push_back(detail::metric_label(rep, mr.metric));
      group.push_back("");
      head.push_back("Actor ID");
      head.push_back("Dynamicity");
    }
    t.row(group);
    t.row(head);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> line{std::to_string(r + 1)};
      for (const auto& mr : rep.metrics) {
        if (r < mr.top.size()) {
          line.push_back(mr.top[r].actor_id);
          line.push_back(format_number(mr.top[r].dda));
        } else {
          line.push_back("");
          line.push_back("");
        }
      }
      t.row(line);
    }
    t.write(out);
  }

  if (rep.sections.windows) {
    out << "\nDYNAMICITY SHOWN BY SHORT-INTERVAL NETWORK (DDN^SIN)\n";
    detail::TextTable t;
    std::vector<std::string> head{"SIN ID", "Start", "End", "Events", "Actors"};
    for (const auto& mr : rep.metrics) head.push_back(detail::metric_label(rep, mr.metric));
    t.row(head);
    for (std::size_t j = 0; j < md.windows.size(); ++j) {
      const auto& w = md.windows[j];
      std::vector<std::string> line{std::to_string(w.index), format_utc(w.start), format_utc(w.end),
                                    std::to_string(w.events), std::to_string(w.actors)};
      for (const auto& mr : rep.metrics) {
        line.push_back(j < mr.window_ddn.size() && mr.window_ddn[j] ? format_number(*mr.window_ddn[j])
                                                                    : "undef");
      }
      t.row(line);
    }
    t.write(out);
  }

  if (rep.sections.network) {
    out << "\nDEGREE OF DYNAMICITY SHOWN BY THE LONGITUDINAL NETWORK (DDN)\n";
    detail::TextTable t;
    t.row({"Metric", "Mode", "DDN", "DDN (eq6)", "DDN (mean)", "DDA*"});
    for (const auto& mr : rep.metrics) {
      t.row({detail::metric_label(rep, mr.metric), mr.ddn_mode, format_number(mr.ddn),
             format_number(mr.ddn_eq6), format_number(mr.ddn_mean), format_number(mr.dda_star)});
    }
    t.write(out);
  }

  if (rep.sections.actors) {
    for (const auto& mr : rep.metrics) {
      out << "\nACTOR DYNAMICITY AND CONTRIBUTION: " << detail::metric_label(rep, mr.metric) << '\n';
      detail::TextTable t;
      t.row({"Actor ID", "DDA", "DDN^i"});
      for (const auto& a : mr.actors) t.row({a.actor_id, format_number(a.dda), format_number(a.contribution)});
      t.write(out);
    }
  }

  if (rep.sections.matrix) {
    for (const auto& mr : rep.metrics) {
      out << "\nACTOR x WINDOW DYNAMICITY: " << detail::metric_label(rep, mr.metric) << '\n';
      detail::TextTable t;
      std::vector<std::string> head{"Actor ID"};
      for (std::size_t j = 0; j < md.m; ++j) head.push_back("SIN " + std::to_string(j + 1));
      t.row(head);
      for (const auto& r : mr.matrix) {
        std::vector<std::string> line{r.actor_id};
        for (double v : r.values) line.push_back(format_number(v));
        t.row(line);
      }
      t.write(out);
    }
  }
}

// ---------------------------------------------------------------------------
// CSV tables

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_cell(cells[i]);
  }
  return line + '\n';
}

}  // namespace detail

/// Named CSV tables for a report, in a fixed order.
inline std::vector<std::pair<std::string, std::string>> csv_tables(const DynamicityReport& rep) {
  using detail::csv_line;
  std::vector<std::pair<std::string, std::string>> tables;
  const auto& md = rep.metadata;
  {
    std::string t = csv_line({"key", "value"});
    t += csv_line({"tool", md.tool});
    t += csv_line({"version", md.version});
    t += csv_line({"command", md.command});
    for (const auto& [k, v] : md.config) t += csv_line({k, v});
    t += csv_line({"m", std::to_string(md.m)});
    t += csv_line({"n", std::to_string(md.n)});
    t += csv_line({"rows_read", std::to_string(md.rows_read)});
    t += csv_line({"rows_accepted", std::to_string(md.rows_accepted)});
    t += csv_line({"rows_malformed", std::to_string(md.rows_malformed)});
    t += csv_line({"self_loops_dropped", std::to_string(md.self_loops_dropped)});
    t += csv_line({"duplicate_edges_collapsed", std::to_string(md.duplicate_edges_collapsed)});
    t += csv_line({"aggregated_edges", std::to_string(md.aggregated_edges)});
    tables.emplace_back("metadata", std::move(t));
  }
  if (rep.sections.top) {
    for (const auto& mr : rep.metrics) {
      std::string t = csv_line({"rank", "actor_id", "dda"});
      for (const auto& r : mr.top) t += csv_line({std::to_string(r.rank), r.actor_id, format_number(r.dda)});
      tables.emplace_back("actors_" + mr.metric, std::move(t));
    }
  }
  if (rep.sections.windows) {
    std::vector<std::string> head{"window", "start", "end", "events", "actors"};
    for (const auto& mr : rep.metrics) head.push_back(mr.metric);
    std::string t = csv_line(head);
    for (std::size_t j = 0; j < md.windows.size(); ++j) {
      const auto& w = md.windows[j];
      std::vector<std::string> line{std::to_string(w.index), std::to_string(w.start), std::to_string(w.end),
                                    std::to_string(w.events), std::to_string(w.actors)};
      for (const auto& mr : rep.metrics) {
        line.push_back(j < mr.window_ddn.size() && mr.window_ddn[j] ? format_number(*mr.window_ddn[j]) : "");
      }
      t += csv_line(line);
    }
    tables.emplace_back("windows", std::move(t));
  }
  if (rep.sections.network) {
    std::string t = csv_line({"metric", "mode", "ddn", "ddn_eq6", "ddn_mean", "dda_star"});
    for (const auto& mr : rep.metrics) {
      t += csv_line({mr.metric, mr.ddn_mode, format_number(mr.ddn), format_number(mr.ddn_eq6),
                     format_number(mr.ddn_mean), format_number(mr.dda_star)});
    }
    tables.emplace_back("network", std::move(t));
  }
  if (rep.sections.actors) {
    for (const auto& mr : rep.metrics) {
      std::string t = csv_line({"actor_id", "dda", "contribution"});
      for (const auto& a : mr.actors) t += csv_line({a.actor_id, format_number(a.dda), format_number(a.contribution)});
      tables.emplace_back("dda_" + mr.metric, std::move(t));
    }
  }
  if (rep.sections.matrix) {
    for (const auto& mr : rep.metrics) {
      std::vector<std::string> head{"actor_id"};
      for (std::size_t j = 0; j < md.m; ++j) head.push_back("w" + std::to_string(j + 1));
      std::string t = csv_line(head);
      for (const auto& r : mr.matrix) {
        std::vector<std::string> line{r.actor_id};
        for (double v : r.values) line.push_back(format_number(v));
        t += csv_line(line);
      }
      tables.emplace_back("matrix_" + mr.metric, std::move(t));
    }
  }
  return tables;
}

// ---------------------------------------------------------------------------
// Emission

inline void write_report(std::ostream& out, const DynamicityReport& rep, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      out << report_to_json(rep).dump(2) << '\n';
      break;
    case OutputFormat::text:
      write_text(out, rep);
      break;
    case OutputFormat::csv: {
      bool first = true;
      for (const auto& [name, body] : csv_tables(rep)) {
        if (!first) out << '\n';
        first = false;
        out << "# " << name << '\n' << body;
      }
      break;
    }
  }
}

/// Writes to stdout when destination is empty. For CSV a destination is a
/// directory that receives one <table>.csv per table; otherwise it is a file.
inline void emit_report(const DynamicityReport& rep, OutputFormat format,
                        const std::optional<std::string>& destination, std::ostream& stdout_stream = std::cout) {
  namespace fs = std::filesystem;
  if (!destination) {
    write_report(stdout_stream, rep, format);
    stdout_stream.flush();
    return;
  }
  const auto write_file = [](const fs::path& path, const auto& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IngestError("cannot write '" + path.string() + "'");
    body(f);
    f.flush();
    if (!f) throw IngestError("write failed for '" + path.string() + "'");
  };
  if (format == OutputFormat::csv) {
    const fs::path dir(*destination);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IngestError("cannot create output directory '" + dir.string() + "'");
    for (const auto& [name, body] : csv_tables(rep)) {
      write_file(dir / (name + ".csv"), [&](std::ostream& f) { f << body; });
    }
    return;
  }
  write_file(fs::path(*destination), [&](std::ostream& f) { write_report(f, rep, format); });
}

}  // namespace lsndyn
