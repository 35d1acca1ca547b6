#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsndyn/centrality.hpp"
#include "lsndyn/errors.hpp"
#include "lsndyn/temporal.hpp"

namespace lsndyn {

/// Observed centralities: one set on the aggregated network and one per
/// window. An actor missing from a window's graph observes 0 there.
struct ObservedValues {
  CentralityScores aggregated;
  std::vector<CentralityScores> per_window;

  std::size_t m() const noexcept { return per_window.size(); }
};

/// Measures `spec` on the aggregated network and on every window graph.
/// The aggregated size is passed through for aggregated-base normalization.
inline ObservedValues observe(const SlicedNetwork& sliced, const MetricSpec& spec) {
  ObservedValues obs;
  const std::size_t n = sliced.n();
  obs.aggregated = compute_metric(sliced.aggregated, spec, n);
  obs.per_window.reserve(sliced.m());
  for (const auto& sin : sliced.sins) {
    obs.per_window.push_back(compute_metric(sin.graph, spec, n));
  }
  return obs;
}

/// Dense actor x window matrix of alpha-weighted deviations.
struct ActorWindowMatrix {
  std::vector<ActorId> actors;
  std::size_t windows = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t actor, std::size_t window) const {
    return values.at(actor * windows + window);
  }
};

struct ActorDynamicity {
  std::vector<ActorId> actors;
  std::vector<double> dda;
  double dda_star = 0.0;

  std::size_t n() const noexcept { return actors.size(); }
};

struct WindowDynamicity {
  std::vector<std::optional<double>> ddn;  // nullopt when the window has no actors
  std::vector<std::size_t> w;
};

enum class DdnMode { eq6_literal, mean_dda };

inline std::string_view to_string(DdnMode m) {
  return m == DdnMode::eq6_literal ? "eq6" : "mean";
}

inline DdnMode parse_ddn_mode(std::string_view s) {
  if (s == "eq6" || s == "eq6_literal") return DdnMode::eq6_literal;
  if (s == "mean" || s == "mean_dda") return DdnMode::mean_dda;
  throw ConfigError("unknown DDN mode '" + std::string(s) + "'");
}

struct NetworkDynamicity {
  double ddn = 0.0;
  std::vector<double> contributions;
  DdnMode mode = DdnMode::eq6_literal;
};

struct RankedActor {
  ActorId actor;
  double dda = 0.0;

  friend bool operator==(const RankedActor&, const RankedActor&) = default;
};

namespace detail {

inline void check_dimensions(const ObservedValues& obs, const AlphaWeights& alpha) {
  if (obs.m() != alpha.windows) {
    throw ConsistencyError("observed values cover " + std::to_string(obs.m()) +
                           " windows but alpha weights cover " + std::to_string(alpha.windows));
  }
  if (obs.aggregated.actors != alpha.actors) {
    throw ConsistencyError("observed values and alpha weights disagree on the actor universe");
  }
  if (alpha.alpha.size() != alpha.actors.size() * alpha.windows) {
    throw ConsistencyError("alpha weight matrix has the wrong shape");
  }
}

}  // namespace detail

/// d(i,j) = alpha(i,j) * |OV_aggregated(i) - OV_window_j(i)|.
inline ActorWindowMatrix actor_window_dynamicity(const ObservedValues& obs,
                                                 const AlphaWeights& alpha) {
  detail::check_dimensions(obs, alpha);
  ActorWindowMatrix mat;
  mat.actors = alpha.actors;
  mat.windows = alpha.windows;
  mat.values.assign(mat.actors.size() * mat.windows, 0.0);
  for (std::size_t i = 0; i < mat.actors.size(); ++i) {
    const double agg = obs.aggregated.scores[i];
    for (std::size_t j = 0; j < mat.windows; ++j) {
      const double local = obs.per_window[j].score_or_zero(mat.actors[i]);
      mat.values[i * mat.windows + j] = alpha.at(i, j) * std::abs(agg - local);
    }
  }
  return mat;
}

/// Row means of a precomputed deviation matrix, plus their maximum.
inline ActorDynamicity actor_dynamicity(const ActorWindowMatrix& mat) {
  if (mat.windows == 0) throw ConsistencyError("dynamicity needs at least one window");
  ActorDynamicity ad;
  ad.actors = mat.actors;
  ad.dda.assign(mat.actors.size(), 0.0);
  const double m = static_cast<double>(mat.windows);
  for (std::size_t i = 0; i < mat.actors.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < mat.windows; ++j) sum += mat.at(i, j);
    ad.dda[i] = sum / m;
  }
  if (!ad.dda.empty()) ad.dda_star = *std::max_element(ad.dda.begin(), ad.dda.end());
  return ad;
}

/// Per-actor dynamicity: mean over all m windows of the weighted deviation.
inline ActorDynamicity actor_dynamicity(const ObservedValues& obs, const AlphaWeights& alpha) {
  return actor_dynamicity(actor_window_dynamicity(obs, alpha));
}

/// Contribution of each actor: (1 - (DDA* - DDA_i)) / n.
inline std::vector<double> actor_contribution(const ActorDynamicity& ad, std::size_t n) {
  if (n == 0) throw IngestError("no actors in the aggregated network");
  if (n != ad.n()) {
    throw ConsistencyError("actor count " + std::to_string(n) + " does not match " +
                           std::to_string(ad.n()) + " dynamicity entries");
  }
  std::vector<double> out(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (1.0 - (ad.dda_star - ad.dda[i])) / dn;
  return out;
}

/// Average weighted deviation over the w_j actors present in window j.
/// Windows with no actors are left undefined.
inline WindowDynamicity window_dynamicity(const ActorWindowMatrix& mat,
                                          const PresenceMatrix& presence) {
  if (presence.actors != mat.actors || presence.windows != mat.windows) {
    throw ConsistencyError("presence matrix does not match the dynamicity matrix");
  }
  WindowDynamicity wd;
  wd.ddn.resize(mat.windows);
  wd.w.resize(mat.windows);
  for (std::size_t j = 0; j < mat.windows; ++j) {
    double sum = 0.0;
    std::size_t w = 0;
    for (std::size_t i = 0; i < mat.actors.size(); ++i) {
      if (!presence.at(i, j)) continue;
      sum += mat.at(i, j);
      ++w;
    }
    wd.w[j] = w;
    if (w > 0) wd.ddn[j] = sum / static_cast<double>(w);
  }
  return wd;
}

inline WindowDynamicity window_dynamicity(const ObservedValues& obs, const AlphaWeights& alpha,
                                          const PresenceMatrix& presence) {
  return window_dynamicity(actor_window_dynamicity(obs, alpha), presence);
}

/// Network-level dynamicity.
///
/// eq6_literal sums the per-actor numerators and divides once by n, i.e.
/// sum_i [1 - (DDA* - DDA_i)] / n = 1 - DDA* + mean(DDA). mean_dda is the
/// plain mean of DDA. Contributions are always the eq6 per-actor terms.
inline NetworkDynamicity network_dynamicity(const ActorDynamicity& ad, std::size_t n,
                                            DdnMode mode) {
  NetworkDynamicity nd;
  nd.mode = mode;
  nd.contributions = actor_contribution(ad, n);
  double sum = 0.0;
  if (mode == DdnMode::eq6_literal) {
    for (double d : ad.dda) sum += 1.0 - (ad.dda_star - d);
  } else {
    for (double d : ad.dda) sum += d;
  }
  nd.ddn = sum / static_cast<double>(n);
  return nd;
}

/// Top-k actors by DDA, descending; ties go to the lexicographically
/// smaller label.
inline std::vector<RankedActor> rank_actors(const ActorDynamicity& ad, std::size_t k) {
  if (k < 1) throw ConfigError("top-k must be at least 1");
  std::vector<std::size_t> order(ad.n());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto better = [&](std::size_t a, std::size_t b) {
    if (ad.dda[a] != ad.dda[b]) return ad.dda[a] > ad.dda[b];
    return ad.actors[a] < ad.actors[b];
  };
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    better);
  std::vector<RankedActor> out;
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r) out.push_back({ad.actors[order[r]], ad.dda[order[r]]});
  return out;
}

}  // namespace lsndyn
