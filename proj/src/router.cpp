#include "odmts/router.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "odmts/parallel.hpp"

namespace odmts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr StopIndex kNone = std::numeric_limits<StopIndex>::max();

struct Label {
  double g = kInf;
  double f = kInf;
  std::size_t legs = std::numeric_limits<std::size_t>::max();

  auto key() const { return std::tie(g, f, legs); }
};

/// Open bus arcs leaving each hub, as target stops.
std::vector<std::vector<StopIndex>> bus_out(const Instance& inst, const Design& z) {
  std::vector<std::vector<StopIndex>> out(inst.hub_count());
  for (ArcIndex a : z.open_arcs()) {
    out[inst.arcs()[a].from].push_back(inst.hub_stop(inst.arcs()[a].to));
  }
  return out;
}

std::vector<std::vector<StopIndex>> bus_in(const Instance& inst, const Design& z) {
  std::vector<std::vector<StopIndex>> in(inst.hub_count());
  for (ArcIndex a : z.open_arcs()) {
    in[inst.arcs()[a].to].push_back(inst.hub_stop(inst.arcs()[a].from));
  }
  return in;
}

struct Chain {
  std::vector<StopIndex> stops;
  std::vector<Mode> modes;
};

Chain chain_to(StopIndex v, const std::vector<StopIndex>& pred, const std::vector<Mode>& pred_mode) {
  Chain c;
  for (StopIndex s = v; s != kNone; s = pred[s]) {
    c.stops.push_back(s);
    if (pred[s] != kNone) c.modes.push_back(pred_mode[s]);
  }
  std::reverse(c.stops.begin(), c.stops.end());
  std::reverse(c.modes.begin(), c.modes.end());
  return c;
}

bool chain_less(const Chain& a, const Chain& b) {
  if (a.stops != b.stops) return a.stops < b.stops;
  // bus sorts before shuttle
  return a.modes < b.modes;
}

}  // namespace

bool Route::uses_bus() const {
  return std::any_of(legs.begin(), legs.end(), [](const Leg& l) { return l.mode == Mode::bus; });
}

std::optional<std::pair<StopIndex, StopIndex>> Route::bus_span() const {
  std::optional<std::pair<StopIndex, StopIndex>> span;
  for (const Leg& l : legs) {
    if (l.mode != Mode::bus) continue;
    if (!span) span.emplace(l.from, l.to);
    span->second = l.to;
  }
  return span;
}

bool shuttle_allowed(const Instance& inst, const Trip& trip, StopIndex i, StopIndex j) {
  if (i == j) return false;
  if (inst.params().shuttle_between_hubs) return true;
  if (i == trip.origin && j == trip.destination) return true;
  return !(inst.is_hub(i) && inst.is_hub(j));
}

Route measure_legs(const Instance& inst, std::vector<Leg> legs) {
  const WeightTable& w = inst.weights();
  const double omega = inst.params().omega;
  Route r;
  for (const Leg& leg : legs) {
    if (leg.mode == Mode::shuttle) {
      r.g += w.gamma(leg.from, leg.to);
      r.f += inst.time(leg.from, leg.to);
      r.money += omega * inst.dist(leg.from, leg.to);
      r.shuttle_km += inst.dist(leg.from, leg.to);
    } else {
      const HubIndex h = *inst.hub_of(leg.from);
      const HubIndex l = *inst.hub_of(leg.to);
      r.g += w.tau(h, l);
      r.f += w.bus_minutes(h, l);
    }
  }
  r.legs = std::move(legs);
  return r;
}

Route route(const Instance& inst, const Trip& trip, const Design& z) {
  const std::size_t n = inst.stop_count();
  const WeightTable& w = inst.weights();
  const auto buses = bus_out(inst, z);

  std::vector<Label> label(n);
  std::vector<StopIndex> pred(n, kNone);
  std::vector<Mode> pred_mode(n, Mode::shuttle);
  std::vector<char> done(n, 0);
  label[trip.origin] = {0.0, 0.0, 0};

  auto relax = [&](StopIndex u, StopIndex v, double dg, double df, Mode mode) {
    const Label cand{label[u].g + dg, label[u].f + df, label[u].legs + 1};
    if (cand.key() < label[v].key()) {
      label[v] = cand;
      pred[v] = u;
      pred_mode[v] = mode;
    } else if (cand.key() == label[v].key()) {
      Chain mine = chain_to(u, pred, pred_mode);
      mine.stops.push_back(v);
      mine.modes.push_back(mode);
      if (chain_less(mine, chain_to(v, pred, pred_mode))) {
        pred[v] = u;
        pred_mode[v] = mode;
      }
    }
  };

  for (std::size_t iter = 0; iter < n; ++iter) {
    StopIndex u = kNone;
    for (StopIndex s = 0; s < n; ++s) {
      if (done[s] || label[s].g == kInf) continue;
      if (u == kNone || label[s].key() < label[u].key()) u = s;
    }
    if (u == kNone) break;
    done[u] = 1;
    if (u == trip.destination) break;

    if (const auto h = inst.hub_of(u)) {
      for (StopIndex v : buses[*h]) {
        if (done[v]) continue;
        const HubIndex l = *inst.hub_of(v);
        relax(u, v, w.tau(*h, l), w.bus_minutes(*h, l), Mode::bus);
      }
    }
    for (StopIndex v = 0; v < n; ++v) {
      if (done[v] || !shuttle_allowed(inst, trip, u, v)) continue;
      relax(u, v, w.gamma(u, v), inst.time(u, v), Mode::shuttle);
    }
  }

  if (!done[trip.destination]) throw std::logic_error("destination unreachable");

  const Chain c = chain_to(trip.destination, pred, pred_mode);
  std::vector<Leg> legs;
  for (std::size_t k = 0; k + 1 < c.stops.size(); ++k) legs.push_back({c.modes[k], c.stops[k], c.stops[k + 1]});
  return measure_legs(inst, std::move(legs));
}

std::vector<Route> route_batch_serial(const Instance& inst, std::span<const Trip> trips, const Design& z) {
  std::vector<Route> out;
  out.reserve(trips.size());
  for (const Trip& t : trips) out.push_back(route(inst, t, z));
  return out;
}

std::vector<Route> route_batch(const Instance& inst, std::span<const Trip> trips, const Design& z) {
  const auto n = static_cast<std::ptrdiff_t>(trips.size());
  std::vector<Route> out(trips.size());
  detail::ErrorSlot errors(trips.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = route(inst, trips[i], z);
    } catch (...) {
      errors.capture(static_cast<std::size_t>(i));
    }
  }
  errors.rethrow_first();
  return out;
}

namespace {
std::vector<Trip> gather(const Instance& inst, const TripSet& trips) {
  std::vector<Trip> out;
  out.reserve(trips.size());
  for (TripIndex r : trips) out.push_back(inst.trip(r));
  return out;
}
}  // namespace

std::vector<Route> route_batch(const Instance& inst, const TripSet& trips, const Design& z) {
  return route_batch(inst, std::span<const Trip>(gather(inst, trips)), z);
}

std::vector<Route> route_batch_serial(const Instance& inst, const TripSet& trips, const Design& z) {
  return route_batch_serial(inst, std::span<const Trip>(gather(inst, trips)), z);
}

double min_hub_access_km(const Instance& inst, const Trip& trip) {
  double to_hub = kInf;
  double from_hub = kInf;
  for (StopIndex h : inst.hubs()) {
    to_hub = std::min(to_hub, inst.dist(trip.origin, h));
    from_hub = std::min(from_hub, inst.dist(h, trip.destination));
  }
  return to_hub + from_hub;
}

bool is_direct_trip(const Instance& inst, const Trip& trip) {
  return min_hub_access_km(inst, trip) >= inst.dist(trip.origin, trip.destination);
}

namespace {

// Dense Dijkstra on weighted cost only. `forward` grows from the origin along
// edges, otherwise from the destination against them.
std::vector<double> potentials(const Instance& inst, const Trip& trip, const Design& z, bool forward) {
  const std::size_t n = inst.stop_count();
  const WeightTable& w = inst.weights();
  const auto buses = forward ? bus_out(inst, z) : bus_in(inst, z);
  std::vector<double> dist(n, kInf);
  std::vector<char> done(n, 0);
  dist[forward ? trip.origin : trip.destination] = 0.0;

  for (std::size_t iter = 0; iter < n; ++iter) {
    StopIndex u = kNone;
    for (StopIndex s = 0; s < n; ++s) {
      if (!done[s] && dist[s] < kInf && (u == kNone || dist[s] < dist[u])) u = s;
    }
    if (u == kNone) break;
    done[u] = 1;
    if (const auto h = inst.hub_of(u)) {
      for (StopIndex v : buses[*h]) {
        const HubIndex l = *inst.hub_of(v);
        const double tau = forward ? w.tau(*h, l) : w.tau(l, *h);
        dist[v] = std::min(dist[v], dist[u] + tau);
      }
    }
    for (StopIndex v = 0; v < n; ++v) {
      if (done[v]) continue;
      const bool ok = forward ? shuttle_allowed(inst, trip, u, v) : shuttle_allowed(inst, trip, v, u);
      if (!ok) continue;
      dist[v] = std::min(dist[v], dist[u] + (forward ? w.gamma(u, v) : w.gamma(v, u)));
    }
  }
  return dist;
}

}  // namespace

std::vector<double> cost_to_destination(const Instance& inst, const Trip& trip, const Design& z) {
  return potentials(inst, trip, z, false);
}

std::vector<double> cost_from_origin(const Instance& inst, const Trip& trip, const Design& z) {
  return potentials(inst, trip, z, true);
}

}  // namespace odmts
