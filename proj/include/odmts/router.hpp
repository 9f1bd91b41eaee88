#pragma once

#include <optional>
#include <span>
#include <vector>

#include "odmts/design.hpp"
#include "odmts/instance.hpp"

namespace odmts {

enum class Mode { bus, shuttle };

struct Leg {
  Mode mode = Mode::shuttle;
  StopIndex from = 0;
  StopIndex to = 0;
  bool operator==(const Leg&) const = default;
};

/// A follower route. g is the weighted cost, f the rider travel time in
/// minutes (in-vehicle plus bus waits), money the shuttle dollars.
struct Route {
  std::vector<Leg> legs;
  double g = 0.0;
  double f = 0.0;
  double money = 0.0;
  double shuttle_km = 0.0;

  bool is_direct_shuttle() const { return legs.size() == 1 && legs.front().mode == Mode::shuttle; }
  bool uses_bus() const;
  /// First and last hub stops of a route with bus legs.
  std::optional<std::pair<StopIndex, StopIndex>> bus_span() const;
};

/// Lexicographic minimizer of (g, f) over shuttle legs and open bus arcs.
/// Remaining ties go to fewer legs, then the smallest stop sequence, then
/// bus before shuttle on parallel legs.
Route route(const Instance& inst, const Trip& trip, const Design& z);

/// Parallel over trips; bit-identical to route_batch_serial.
std::vector<Route> route_batch(const Instance& inst, std::span<const Trip> trips, const Design& z);
std::vector<Route> route_batch(const Instance& inst, const TripSet& trips, const Design& z);

/// Serial reference kernel.
std::vector<Route> route_batch_serial(const Instance& inst, std::span<const Trip> trips, const Design& z);
std::vector<Route> route_batch_serial(const Instance& inst, const TripSet& trips, const Design& z);

/// True when no hub pair offers a shorter shuttle distance than the direct
/// leg; such trips take the direct shuttle under every design.
bool is_direct_trip(const Instance& inst, const Trip& trip);

/// min over hubs h,l of d(origin,h) + d(l,destination).
double min_hub_access_km(const Instance& inst, const Trip& trip);

/// Minimal weighted cost from every stop to the trip destination (b) and from
/// the trip origin to every stop (a), over the trip's follower graph under z.
std::vector<double> cost_to_destination(const Instance& inst, const Trip& trip, const Design& z);
std::vector<double> cost_from_origin(const Instance& inst, const Trip& trip, const Design& z);

/// Recomputes g, f, money and shuttle_km from the legs, accumulating in leg order.
Route measure_legs(const Instance& inst, std::vector<Leg> legs);

/// Whether the follower graph of `trip` contains a shuttle edge from i to j.
bool shuttle_allowed(const Instance& inst, const Trip& trip, StopIndex i, StopIndex j);

}  // namespace odmts
