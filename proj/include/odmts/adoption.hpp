#pragma once

#include <optional>
#include <vector>

#include "odmts/design.hpp"
#include "odmts/dfd.hpp"
#include "odmts/instance.hpp"
#include "odmts/router.hpp"

namespace odmts {

/// 1 iff the route is no slower than alpha * t_cur (non-strict).
/// Throws std::invalid_argument for core trips.
bool choice(const Route& route, const Trip& trip);

/// Shuttle dollars minus the fare.
double net_cost(const Route& route, const Instance& inst);

struct Kpis {
  double shuttle_km = 0.0;            // p-weighted, over core riders and adopters
  double bus_investment = 0.0;        // sum beta z (weighted)
  double bus_cost_dollars = 0.0;      // sum of unweighted arc costs
  double convenience_minutes = 0.0;   // sum p f over served trips
  double agency_net_cost = 0.0;       // bus dollars + sum p (money - fare) over served trips
};

struct DesignEvaluation {
  double objective = 0.0;
  std::vector<int> adopters;  // latent trip ids with delta = 1, ascending
  double r_false = 0.0;       // percent of latent trips
  double a_false = 0.0;
  Kpis kpis;
  std::vector<Route> routes;          // one per instance trip
  std::vector<std::uint8_t> adopts;   // per instance trip; 1 for core trips
};

/// Routes every trip under z and scores the design. `t_hat` is the trip set
/// the design was produced from; it only enters the false rates.
DesignEvaluation eval_design(const Instance& inst, const Design& z, const TripSet& t_hat);

/// Same, sequential reference.
DesignEvaluation eval_design_serial(const Instance& inst, const Design& z, const TripSet& t_hat);

/// Recomputes r_false and a_false of `ev` for another trip set.
void set_false_rates(const Instance& inst, DesignEvaluation& ev, const TripSet& t_hat);

/// Objective only, without the trip-set metrics.
double eval_objective(const Instance& inst, const Design& z);

/// core trips plus latent trips adopting z.
TripSet adopter_set(const Instance& inst, const DesignEvaluation& ev);

struct ExactResult {
  Design design;
  DesignEvaluation evaluation;
  TripSet t_star;           // core plus adopters of the optimum
  std::size_t designs = 0;  // designs enumerated
  /// DFD(t_star) re-solved; empty when that solve is skipped.
  std::optional<Design> dfd_design;
  std::optional<DesignEvaluation> dfd_evaluation;
  bool dfd_reproduces = false;  // dfd_design == design
};

/// Exhaustive minimizer of eval over weakly connected designs containing
/// `fixed`, ties to the canonically first design.
ExactResult exact_tiny(const Instance& inst, const Design& fixed, bool resolve_dfd = true);

}  // namespace odmts
