#pragma once

// Brute-force references used only by the tests. Nothing here calls the
// routines it checks.

#include <vector>

#include "odmts/design.hpp"
#include "odmts/instance.hpp"
#include "odmts/router.hpp"

namespace odmts::oracle {

struct PathResult {
  std::vector<Leg> legs;
  double g = 0.0;
  double f = 0.0;
  double money = 0.0;
  double km = 0.0;
  std::size_t paths = 0;  // simple paths inspected
};

/// Every simple path of the follower multigraph, keeping the minimum of
/// (g, f, legs, stop sequence, mode sequence with bus first). Costs are
/// summed leg by leg from the origin.
PathResult brute_route(const Instance& inst, const Trip& trip, const Design& z);

/// Lexicographic minimum of (g, f) by Bellman-Ford relaxation of label
/// pairs; much cheaper than path enumeration on 10-stop instances.
std::pair<double, double> brute_gf(const Instance& inst, const Trip& trip, const Design& z);

/// In-degree equals out-degree at every hub, counted from the arc list.
bool brute_balanced(const Instance& inst, const Design& z);

/// All balanced supersets of `fixed`, by increasing 0/1 vector (first arc most significant).
std::vector<Design> brute_designs(const Instance& inst, const Design& fixed);

struct DfdOracle {
  Design design;
  double objective = 0.0;
};

/// Fixed-demand optimum by enumeration; ties within 1e-9 relative go to the first design.
DfdOracle brute_dfd(const Instance& inst, const std::vector<std::size_t>& trips, const Design& fixed);

/// Fixed-demand objective using brute_gf.
double brute_dfd_value(const Instance& inst, const std::vector<std::size_t>& trips, const Design& z);

/// eval(z) using brute_gf and the choice rule written out again.
double brute_eval(const Instance& inst, const Design& z);

/// Elementary cycles by checking every node subset and ordering; each
/// rotation-normalized to start at its smallest node.
std::vector<std::vector<std::size_t>> brute_cycles(std::size_t nodes, const std::vector<HubArc>& arcs);

}  // namespace odmts::oracle
