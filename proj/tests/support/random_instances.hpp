#pragma once

#include <random>

#include "odmts/design.hpp"
#include "odmts/instance.hpp"

namespace odmts::testkit {

/// Up to 8 stops and 3 hubs, arbitrary (non-metric) matrices on a half-minute
/// grid so that exact ties are common.
Instance random_router_instance(std::mt19937_64& rng);

/// Euclidean instance with 3 or 4 hubs, at most 10 stops, all ordered hub
/// pairs as candidates (so at most 12 arcs), mixed core and latent trips.
Instance random_metric_instance(std::mt19937_64& rng);

/// Any subset of the candidate arcs, not necessarily balanced.
Design random_arc_subset(const Instance& inst, std::mt19937_64& rng);

/// Hand-traceable 4-stop instance with hubs at stops 1 and 2.
///   t: 0-1 5, 1-2 10, 2-3 4, 0-3 25, 1-3 24, 0-2 22 (symmetric)
///   d: 0-1 2, 1-2 8, 2-3 1.5, 0-3 12, 1-3 10, 0-2 10
/// theta 0.5, omega 1, wait 5, ticket 2.5, bus rate * buses = `bus_scale`.
InstanceData routing_example_data(double bus_scale = 0.5);

}  // namespace odmts::testkit
