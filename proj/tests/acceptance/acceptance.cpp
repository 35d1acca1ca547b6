#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lsndyn/report.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/s1.hpp"

using namespace lsndyn;
namespace lt = lsndyn::testing;

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kClosedFormTol = 1e-12;
constexpr double kLimitAlpha = 1.0;
constexpr double kLimitCentrality = 30.0;
constexpr double kLimitS1 = 1.0;
constexpr double kLimitStatic = 1.0;
constexpr double kLimitRanges = 60.0;
constexpr double kLimitScale = 60.0;

// A criterion reports problems through `fail`; it passes when none were
// reported and it finished within its time limit.
struct Check {
  std::vector<std::string> problems;
  void fail(std::string msg) {
    if (problems.size() < 10) problems.push_back(std::move(msg));
  }
  void expect(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }
};

int failures = 0;

void criterion(int number, const std::string& title, double limit_seconds, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_seconds) c.fail("took " + format_number(secs) + " s, limit " + format_number(limit_seconds) + " s");
  const bool pass = c.problems.empty();
  if (!pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3f s", secs);
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << number << ": " << title << " (" << timing << ")\n";
  for (const auto& p : c.problems) std::cout << "      " << p << '\n';
  std::cout.flush();
}

// 1
void alpha_table(Check& c) {
  c.expect(transition_alpha(true, true) == 1.0, "present/present != 1.0");
  c.expect(transition_alpha(true, false) == 0.5, "present after absent != 0.5");
  c.expect(transition_alpha(false, true) == 0.0, "absent after present != 0.0");
  c.expect(transition_alpha(false, false) == 0.0, "absent/absent != 0.0");
  c.expect(first_window_alpha(true) == 1.0, "first window present != 1.0");

  PresenceMatrix p;
  p.actors = {ActorId("aa"), ActorId("ap"), ActorId("pa"), ActorId("pp")};
  p.windows = 2;
  p.present = {0, 0, 0, 1, 1, 0, 1, 1};
  const auto a = alpha_weights(p);
  const std::vector<double> want{0.0, 0.0, 0.0, 0.5, 1.0, 0.0, 1.0, 1.0};
  c.expect(a.alpha == want, "alpha_weights disagrees with the transition table");
}

// 2
void centrality_oracles(Check& c) {
  std::mt19937_64 rng(2002);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rg = lt::random_graph(rng, 7, trial % 2 == 1, trial % 3 == 0);
    const auto g = lt::to_graph(rg);
    const auto got = betweenness_centrality(g, rg.n).scores;
    const auto want = lt::oracle_betweenness(lt::AdjMatrix(rg.n, rg.directed, rg.edges), rg.n);
    for (std::size_t v = 0; v < rg.n; ++v) {
      if (std::abs(got[v] - want[v]) > kOracleTol) {
        c.fail("betweenness trial " + std::to_string(trial) + " node " + std::to_string(v) + ": " +
               format_number(got[v]) + " vs " + format_number(want[v]));
      }
    }
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto rg = lt::random_graph(rng, 50, trial % 2 == 1);
    const auto g = lt::to_graph(rg);
    const lt::AdjMatrix m(rg.n, rg.directed, rg.edges);
    const auto h = closeness_centrality(g, ClosenessVariant::harmonic, rg.n).scores;
    const auto wf = closeness_centrality(g, ClosenessVariant::wf_corrected, rg.n).scores;
    const auto d = degree_centrality(g, DegreeDirection::all, rg.n).scores;
    const auto oh = lt::oracle_harmonic(m, rg.n), owf = lt::oracle_wf(m, rg.n), od = lt::oracle_degree(m, rg.n);
    for (std::size_t v = 0; v < rg.n; ++v) {
      const std::string where = " trial " + std::to_string(trial) + " node " + std::to_string(v);
      c.expect(std::abs(h[v] - oh[v]) <= kOracleTol, "harmonic closeness" + where);
      c.expect(std::abs(wf[v] - owf[v]) <= kOracleTol, "wf closeness" + where);
      c.expect(std::abs(d[v] - od[v]) <= kOracleTol, "degree" + where);
    }
  }
}

// 3
void s1_end_to_end(Check& c) {
  for (const auto& p : lt::compare_with_oracle(lt::s1_report(), lt::s1_oracle(), kOracleTol)) c.fail(p);
}

// 4
void static_identity(Check& c) {
  std::mt19937_64 rng(4004);
  for (int trial = 0; trial < 30; ++trial) {
    const auto base = lt::random_graph(rng, 12, trial % 2 == 1, true);
    if (base.n < 2) continue;
    TemporalEdgeList events;
    for (Timestamp j = 0; j < 5; ++j) {
      for (auto [u, v] : base.edges) events.push_back({ActorId(base.labels[u]), ActorId(base.labels[v]), j * 100 + 1, std::nullopt});
    }
    const auto sliced = slice(events, FixedDuration{100, 0}, base.directed ? Directedness::directed : Directedness::undirected);
    const auto presence = presence_matrix(sliced);
    const auto alpha = alpha_weights(presence);
    for (auto kind : {MetricKind::degree, MetricKind::closeness, MetricKind::betweenness}) {
      const auto obs = observe(sliced, {kind, ClosenessVariant::harmonic, NormalizationBase::per_network});
      const auto ad = actor_dynamicity(obs, alpha);
      const std::string where = std::string(to_string(kind)) + " trial " + std::to_string(trial);
      for (double d : ad.dda) c.expect(d == 0.0, "nonzero DDA, " + where);
      for (const auto& w : window_dynamicity(obs, alpha, presence).ddn) {
        c.expect(w.has_value() && *w == 0.0, "nonzero DDN^SIN, " + where);
      }
      c.expect(network_dynamicity(ad, sliced.n(), DdnMode::eq6_literal).ddn == 1.0, "eq6 DDN != 1.0, " + where);
    }
  }
}

// 5
void range_properties(Check& c) {
  std::mt19937_64 rng(5005);
  int instances = 0;
  while (instances < 500) {
    const auto events = lt::random_temporal(rng, 30, 8);
    const bool directed = instances % 4 == 3;
    const auto sliced = slice(events, FixedDuration{100, 0}, directed ? Directedness::directed : Directedness::undirected);
    const std::size_t n = sliced.n();
    if (n == 0) continue;
    ++instances;
    const auto presence = presence_matrix(sliced);
    const auto alpha = alpha_weights(presence);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto kind : {MetricKind::degree, MetricKind::closeness, MetricKind::betweenness}) {
      const auto variant = instances % 2 ? ClosenessVariant::harmonic : ClosenessVariant::wf_corrected;
      const auto base = instances % 3 ? NormalizationBase::per_network : NormalizationBase::aggregated_n;
      const auto obs = observe(sliced, {kind, variant, base});
      const auto ad = actor_dynamicity(obs, alpha);
      const auto eq6 = network_dynamicity(ad, n, DdnMode::eq6_literal);
      const auto mean = network_dynamicity(ad, n, DdnMode::mean_dda);
      const auto wd = window_dynamicity(obs, alpha, presence);
      const std::string where = std::string(to_string(kind)) + " instance " + std::to_string(instances);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        c.expect(ad.dda[i] >= 0.0 && ad.dda[i] <= 1.0, "DDA out of range, " + where);
        c.expect(eq6.contributions[i] >= 0.0 && eq6.contributions[i] <= inv_n, "DDN^i out of range, " + where);
        if (ad.dda[i] == ad.dda_star) c.expect(eq6.contributions[i] == inv_n, "argmax contribution != 1/n, " + where);
        sum += ad.dda[i];
      }
      for (const auto& w : wd.ddn) {
        if (w) c.expect(*w >= 0.0 && *w <= 1.0, "DDN^SIN out of range, " + where);
      }
      c.expect(eq6.ddn >= 0.0 && eq6.ddn <= 1.0, "eq6 DDN out of range, " + where);
      c.expect(mean.ddn >= 0.0 && mean.ddn <= 1.0, "mean DDN out of range, " + where);
      const double closed = 1.0 - ad.dda_star + sum / static_cast<double>(n);
      c.expect(std::abs(eq6.ddn - closed) <= kClosedFormTol, "closed form violated, " + where);
    }
  }
}

// 6
void golden_report(Check& c) {
  auto cfg = lt::s1_config();
  cfg.full = false;
  cfg.metrics = {MetricKind::degree, MetricKind::closeness, MetricKind::betweenness};
  cfg.top_k = 5;
  std::ostringstream out;
  write_report(out, lt::s1_report(cfg), OutputFormat::text);
  const auto text = out.str();
  for (const char* header : {"TOP-5 ACTORS SHOWING HIGHER DYNAMICITY (DDA)", "DYNAMICITY SHOWN BY SHORT-INTERVAL NETWORK (DDN^SIN)",
                             "DEGREE OF DYNAMICITY SHOWN BY THE LONGITUDINAL NETWORK (DDN)"}) {
    c.expect(text.find(header) != std::string::npos, std::string("missing section ") + header);
  }
  const auto golden = lt::read_file(lt::data_path("s1_report.txt"));
  if (text != golden) {
    std::istringstream a(text), b(golden);
    std::string la, lb;
    for (int line = 1;; ++line) {
      const bool ga = static_cast<bool>(std::getline(a, la)), gb = static_cast<bool>(std::getline(b, lb));
      if (!ga && !gb) break;
      if (!ga || !gb || la != lb) {
        c.fail("golden mismatch at line " + std::to_string(line) + ": got '" + (ga ? la : "<eof>") + "', want '" +
               (gb ? lb : "<eof>") + "'");
        break;
      }
    }
  }
}

// 7
std::string synthetic_enron_like() {
  std::mt19937_64 rng(7007);
  constexpr std::size_t actors = 2500, events = 50000;
  const Timestamp start = 994032000;  // 2001-07-02
  const Timestamp span = 183 * 86400;  // through 2001-12-31
  // Skewed activity: a few heavy senders, a long tail of occasional ones.
  std::vector<double> weight(actors);
  for (std::size_t i = 0; i < actors; ++i) weight[i] = 1.0 / std::pow(static_cast<double>(i + 1), 0.8);
  std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
  std::uniform_int_distribution<Timestamp> when(0, span - 1);
  std::ostringstream out;
  out << "sender,recipient,time\n";
  for (std::size_t e = 0; e < events; ++e) {
    const auto a = pick(rng);
    auto b = pick(rng);
    if (a == b) b = (b + 1) % actors;
    out << "user" << a << "@example.com,user" << b << "@example.com," << (start + when(rng)) << '\n';
  }
  return out.str();
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  RunResult r;
  FILE* pipe = popen((std::string(LSNDYN_CLI_PATH) + " " + args + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void scale_run(Check& c) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "lsndyn_acceptance_scale";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto input = dir / "events.csv";
  {
    std::ofstream f(input, std::ios::binary);
    f << synthetic_enron_like();
  }
  std::vector<std::string> reports;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("report" + std::to_string(run) + ".json");
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_cli("compute -i " + input.string() + " --window month --metrics degree,closeness,betweenness "
                           "--full -f json -o " + out.string());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(r.code == 0, "run " + std::to_string(run) + " exited " + std::to_string(r.code) + ": " + r.out);
    c.expect(secs < kLimitScale, "run " + std::to_string(run) + " took " + format_number(secs) + " s");
    if (r.code == 0) reports.push_back(lt::read_file(out.string()));
  }
  if (reports.size() == 2) {
    c.expect(reports[0] == reports[1], "reports differ between runs");
    const auto rep = report_from_json(nlohmann::ordered_json::parse(reports[0]));
    c.expect(rep.metadata.m == 6, "expected 6 monthly windows, got " + std::to_string(rep.metadata.m));
    c.expect(rep.metadata.n >= 2000 && rep.metadata.n <= 2500, "unexpected actor count " + std::to_string(rep.metadata.n));
    c.expect(rep.metadata.rows_accepted == 50000, "expected 50000 events");
    c.expect(rep.metrics.size() == 3, "expected three metrics");
  }
  fs::remove_all(dir);
}

// 8
void tie_breaking(Check& c) {
  // W1: triangles {zeta, alpha, mu} and {p, q, r}; W2: only the first.
  TemporalEdgeList base{
      {ActorId("zeta"), ActorId("alpha"), 10, std::nullopt}, {ActorId("alpha"), ActorId("mu"), 11, std::nullopt},
      {ActorId("mu"), ActorId("zeta"), 12, std::nullopt},    {ActorId("p"), ActorId("q"), 13, std::nullopt},
      {ActorId("q"), ActorId("r"), 14, std::nullopt},        {ActorId("r"), ActorId("p"), 15, std::nullopt},
      {ActorId("zeta"), ActorId("alpha"), 110, std::nullopt}, {ActorId("alpha"), ActorId("mu"), 111, std::nullopt},
      {ActorId("mu"), ActorId("zeta"), 112, std::nullopt},
  };
  const std::vector<std::string> expected{"alpha", "mu", "zeta", "p", "q"};
  RunConfig cfg;
  cfg.window_spec = "fixed:100@0";
  cfg.window = FixedDuration{100, 0};
  cfg.metrics = {MetricKind::degree, MetricKind::closeness};
  std::string first;
  std::mt19937_64 rng(8008);
  for (int run = 0; run < 10; ++run) {
    IngestResult in;
    in.events = base;
    std::shuffle(in.events.begin(), in.events.end(), rng);
    const auto rep = run_compute(cfg, in);
    for (const auto& mr : rep.metrics) {
      std::vector<std::string> got;
      for (const auto& t : mr.top) got.push_back(t.actor_id);
      c.expect(got == expected, mr.metric + " top-5 order wrong in run " + std::to_string(run));
      c.expect(mr.top.size() == 5 && mr.top[0].dda == mr.top[2].dda && mr.top[2].dda > mr.top[3].dda,
               mr.metric + " is not a three-way tie at the top");
    }
    std::ostringstream out;
    write_report(out, rep, OutputFormat::text);
    if (run == 0) first = out.str();
    c.expect(out.str() == first, "report differs in run " + std::to_string(run));
  }
}

}  // namespace

int main() {
  criterion(1, "alpha table conformance", kLimitAlpha, alpha_table);
  criterion(2, "centrality matches brute-force oracles within 1e-9", kLimitCentrality, centrality_oracles);
  criterion(3, "fixture S1 end-to-end matches oracle within 1e-9", kLimitS1, s1_end_to_end);
  criterion(4, "static network identity", kLimitStatic, static_identity);
  criterion(5, "range properties on 500 random temporal networks", kLimitRanges, range_properties);
  criterion(6, "report shapes and S1 golden text", kLimitS1, golden_report);
  criterion(7, "2500 actors, 6 months, 50000 events under 60 s and deterministic", 2 * kLimitScale, scale_run);
  criterion(8, "three-way tie ranked by label across 10 runs", kLimitStatic, tie_breaking);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
