#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lsndyn/errors.hpp"
#include "lsndyn/graph.hpp"

namespace lsndyn {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct TemporalEvent {
  ActorId source;
  ActorId target;
  Timestamp timestamp = 0;
  std::optional<double> weight;  // carried for provenance only

  friend bool operator==(const TemporalEvent&, const TemporalEvent&) = default;
};

using TemporalEdgeList = std::vector<TemporalEvent>;

// ---------------------------------------------------------------------------
// Window plans

struct FixedDuration {
  std::int64_t length = 0;            // seconds, > 0
  std::optional<Timestamp> origin;    // defaults to the earliest event

  friend bool operator==(const FixedDuration&, const FixedDuration&) = default;
};

enum class CalendarUnit { day, week, month };

struct Calendar {
  CalendarUnit unit = CalendarUnit::month;
  std::int64_t utc_offset = 0;  // seconds east of UTC

  friend bool operator==(const Calendar&, const Calendar&) = default;
};

struct ExplicitBounds {
  std::vector<Timestamp> boundaries;  // strictly increasing, >= 2 entries

  friend bool operator==(const ExplicitBounds&, const ExplicitBounds&) = default;
};

using WindowPlan = std::variant<FixedDuration, Calendar, ExplicitBounds>;

inline std::string_view to_string(CalendarUnit u) {
  switch (u) {
    case CalendarUnit::day: return "day";
    case CalendarUnit::week: return "week";
    case CalendarUnit::month: return "month";
  }
  return "?";
}

/// Half-open interval [start, end). Index is zero-based.
struct Window {
  std::size_t index = 0;
  Timestamp start = 0;
  Timestamp end = 0;

  bool contains(Timestamp t) const noexcept { return start <= t && t < end; }
  friend bool operator==(const Window&, const Window&) = default;
};

inline constexpr std::size_t kMaxWindows = 1'000'000;

namespace detail {

constexpr std::int64_t kSecondsPerDay = 86400;

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

inline std::int64_t days_to_seconds(std::chrono::sys_days d) {
  return static_cast<std::int64_t>(d.time_since_epoch().count()) * kSecondsPerDay;
}

// Start of the calendar unit containing t, in UTC seconds.
inline Timestamp calendar_floor(Timestamp t, const Calendar& cal) {
  using namespace std::chrono;
  const std::int64_t local = t + cal.utc_offset;
  const std::int64_t day = floor_div(local, kSecondsPerDay);
  std::int64_t start_day = day;
  switch (cal.unit) {
    case CalendarUnit::day: break;
    case CalendarUnit::week: {
      // ISO weeks start on Monday; 1970-01-01 was a Thursday.
      const std::int64_t weekday = ((day + 3) % 7 + 7) % 7;
      start_day = day - weekday;
      break;
    }
    case CalendarUnit::month: {
      const year_month_day ymd{sys_days{days{day}}};
      start_day = sys_days{ymd.year() / ymd.month() / 1}.time_since_epoch().count();
      break;
    }
  }
  return start_day * kSecondsPerDay - cal.utc_offset;
}

inline Timestamp calendar_next(Timestamp start, const Calendar& cal) {
  using namespace std::chrono;
  switch (cal.unit) {
    case CalendarUnit::day: return start + kSecondsPerDay;
    case CalendarUnit::week: return start + 7 * kSecondsPerDay;
    case CalendarUnit::month: {
      const std::int64_t local_day = floor_div(start + cal.utc_offset, kSecondsPerDay);
      const year_month_day ymd{sys_days{days{local_day}}};
      const year_month next = (ymd.year() / ymd.month()) + months{1};
      return days_to_seconds(sys_days{next / 1}) - cal.utc_offset;
    }
  }
  return start;
}

inline void push_window(std::vector<Window>& out, Timestamp start, Timestamp end) {
  if (out.size() >= kMaxWindows) {
    throw ConfigError("window plan produces more than " + std::to_string(kMaxWindows) +
                      " windows");
  }
  out.push_back({out.size(), start, end});
}

}  // namespace detail

/// Materializes the ordered, contiguous windows covering [min_ts, max_ts].
/// Explicit bounds are returned as given, even if they do not cover the span.
inline std::vector<Window> plan_windows(const WindowPlan& plan, Timestamp min_ts,
                                        Timestamp max_ts) {
  if (max_ts < min_ts) throw ConfigError("window span has max < min");
  std::vector<Window> out;
  if (const auto* fixed = std::get_if<FixedDuration>(&plan)) {
    if (fixed->length <= 0) throw ConfigError("fixed window length must be positive");
    const Timestamp origin = fixed->origin.value_or(min_ts);
    Timestamp start = origin + detail::floor_div(min_ts - origin, fixed->length) * fixed->length;
    while (start <= max_ts) {
      detail::push_window(out, start, start + fixed->length);
      start += fixed->length;
    }
  } else if (const auto* cal = std::get_if<Calendar>(&plan)) {
    Timestamp start = detail::calendar_floor(min_ts, *cal);
    while (start <= max_ts) {
      const Timestamp end = detail::calendar_next(start, *cal);
      detail::push_window(out, start, end);
      start = end;
    }
  } else {
    const auto& b = std::get<ExplicitBounds>(plan).boundaries;
    if (b.size() < 2) throw ConfigError("explicit window bounds need at least two boundaries");
    for (std::size_t i = 1; i < b.size(); ++i) {
      if (b[i] <= b[i - 1]) throw ConfigError("explicit window bounds must be strictly increasing");
      detail::push_window(out, b[i - 1], b[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Slicing

struct ShortIntervalNetwork {
  Window window;
  Graph graph;
  std::size_t event_count = 0;
};

struct SlicedNetwork {
  Directedness mode = Directedness::undirected;
  std::vector<ShortIntervalNetwork> sins;
  Graph aggregated;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;

  std::size_t m() const noexcept { return sins.size(); }
  std::size_t n() const noexcept { return aggregated.node_count(); }
};

/// Assigns every event to the window whose [start, end) contains it and
/// builds one simple graph per window plus their union. Empty windows are
/// kept so window indices track time.
inline SlicedNetwork slice(const TemporalEdgeList& events, const WindowPlan& plan,
                           Directedness mode) {
  if (events.empty()) throw IngestError("no events to analyze");
  const auto [lo, hi] = std::minmax_element(
      events.begin(), events.end(),
      [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  const auto windows = plan_windows(plan, lo->timestamp, hi->timestamp);

  std::vector<std::vector<Edge>> per_window(windows.size());
  std::vector<Timestamp> outside;
  for (const auto& e : events) {
    const auto it = std::upper_bound(
        windows.begin(), windows.end(), e.timestamp,
        [](Timestamp t, const Window& w) { return t < w.start; });
    if (it == windows.begin() || !std::prev(it)->contains(e.timestamp)) {
      outside.push_back(e.timestamp);
      continue;
    }
    per_window[std::prev(it)->index].push_back({e.source, e.target});
  }
  if (!outside.empty()) {
    std::sort(outside.begin(), outside.end());
    outside.erase(std::unique(outside.begin(), outside.end()), outside.end());
    std::string msg = std::to_string(outside.size()) + " event timestamp(s) fall outside every window:";
    for (std::size_t i = 0; i < outside.size() && i < 10; ++i) msg += " " + std::to_string(outside[i]);
    if (outside.size() > 10) msg += " ...";
    throw IngestError(msg);
  }

  SlicedNetwork out;
  out.mode = mode;
  out.sins.reserve(windows.size());
  std::vector<Graph> graphs;
  graphs.reserve(windows.size());
  for (const auto& w : windows) {
    auto built = build_graph(per_window[w.index], mode);
    out.self_loops_dropped += built.self_loops_dropped;
    out.duplicates_collapsed += built.duplicates_collapsed;
    graphs.push_back(built.graph);
    out.sins.push_back({w, std::move(built.graph), per_window[w.index].size()});
  }
  out.aggregated = graph_union(graphs);
  return out;
}

// ---------------------------------------------------------------------------
// Presence and transition weights

/// Actor x window presence over the aggregated actor universe. Rows follow
/// the aggregated network's node order; columns are zero-based windows.
struct PresenceMatrix {
  std::vector<ActorId> actors;
  std::size_t windows = 0;
  std::vector<std::uint8_t> present;  // row-major

  bool at(std::size_t actor, std::size_t window) const {
    return present.at(actor * windows + window) != 0;
  }
  std::size_t count_in_window(std::size_t window) const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < actors.size(); ++i) w += at(i, window) ? 1 : 0;
    return w;
  }
};

/// An actor is present in a window iff it has at least one incident edge
/// there, which is exactly membership in that window's node set.
inline PresenceMatrix presence_matrix(const SlicedNetwork& sliced) {
  PresenceMatrix p;
  p.actors = sliced.aggregated.nodes();
  p.windows = sliced.m();
  p.present.assign(p.actors.size() * p.windows, 0);
  for (std::size_t j = 0; j < p.windows; ++j) {
    const Graph& g = sliced.sins[j].graph;
    for (const auto& id : g.nodes()) {
      const auto row = sliced.aggregated.index_of(id);
      if (!row) throw ConsistencyError("window actor '" + id.str() + "' missing from aggregate");
      p.present[*row * p.windows + j] = 1;
    }
  }
  return p;
}

/// Transition constant for consecutive windows (current, previous):
/// present/present 1.0, present/absent 0.5, absent/* 0.0.
constexpr double transition_alpha(bool present_now, bool present_before) noexcept {
  if (!present_now) return 0.0;
  return present_before ? 1.0 : 0.5;
}

/// The first window has no predecessor: 1.0 if present, else 0.0.
constexpr double first_window_alpha(bool present_now) noexcept {
  return present_now ? 1.0 : 0.0;
}

struct AlphaWeights {
  std::vector<ActorId> actors;
  std::size_t windows = 0;
  std::vector<double> alpha;  // row-major, same layout as PresenceMatrix

  double at(std::size_t actor, std::size_t window) const {
    return alpha.at(actor * windows + window);
  }
};

inline AlphaWeights alpha_weights(const PresenceMatrix& presence) {
  AlphaWeights a;
  a.actors = presence.actors;
  a.windows = presence.windows;
  a.alpha.assign(presence.present.size(), 0.0);
  for (std::size_t i = 0; i < a.actors.size(); ++i) {
    for (std::size_t j = 0; j < a.windows; ++j) {
      const bool now = presence.at(i, j);
      a.alpha[i * a.windows + j] =
          j == 0 ? first_window_alpha(now) : transition_alpha(now, presence.at(i, j - 1));
    }
  }
  return a;
}

}  // namespace lsndyn
