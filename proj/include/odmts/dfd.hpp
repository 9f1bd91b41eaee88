#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "odmts/design.hpp"
#include "odmts/instance.hpp"
#include "odmts/router.hpp"

namespace odmts {

/// Affine lower bound on one trip's weighted cost:
///   g_r(z) >= base - sum_a coeff_a z_a   for every design z.
/// Built from shortest-path duals: base = b(origin) and
/// coeff_hl = min(base, max(0, b(h) - tau_hl - b(l))), with b the cost-to-go
/// to the destination under the generating design. The right-hand side also
/// subtracts `slack`, a few ulps of the cut's magnitude, since b and g are
/// summed in different orders and would otherwise disagree in the last bit.
struct BendersCut {
  TripIndex trip = 0;
  double base = 0.0;
  std::vector<std::pair<ArcIndex, double>> coeff;  // sorted by arc, strictly positive
  double slack = 0.0;

  double coeff_of(ArcIndex a) const;
  double value(const Design& z) const;
};

BendersCut make_cut(const Instance& inst, TripIndex trip, const Design& z);

/// Cuts for several trips; parallel over trips, output in input order.
std::vector<BendersCut> make_cuts(const Instance& inst, const TripSet& trips, const Design& z);
std::vector<BendersCut> make_cuts_serial(const Instance& inst, const TripSet& trips, const Design& z);

/// Cut pool deduplicated by (trip, base, coefficients).
class CutPool {
 public:
  bool add(BendersCut cut);
  const std::vector<BendersCut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }

 private:
  std::vector<BendersCut> cuts_;
  std::set<std::string> keys_;
};

struct MasterOptions {
  double tolerance = 1e-9;       // relative, with absolute fallback near zero
  std::size_t node_limit = 20'000'000;
};

struct MasterResult {
  Design design;
  double lower_bound = 0.0;
  std::size_t nodes = 0;
};

/// Minimizes sum beta z + constant + sum_r p_r max(0, max over r's cuts)
/// over weakly connected designs containing `fixed`, by branch-and-bound on
/// arc variables. Among designs within tolerance of the optimum the
/// canonically first one is returned. `hints` seed the incumbent.
MasterResult solve_master(const Instance& inst, const CutPool& pool, const Design& fixed, double constant = 0.0,
                          const std::vector<Design>& hints = {}, const MasterOptions& options = {});

/// Master objective of a single design under a cut pool.
double master_value(const Instance& inst, const CutPool& pool, const Design& z, double constant = 0.0);

struct RoundLog {
  std::size_t round = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t open_arcs = 0;
  std::size_t cuts_added = 0;
};

struct DfdSolution {
  Design design;
  double objective = 0.0;
  TripSet trips;              // the solved trip set
  std::vector<Route> routes;  // aligned with `trips`
  std::vector<RoundLog> rounds;
  std::size_t iterations = 0;
  std::vector<BendersCut> cuts;  // filled when DfdOptions::keep_cuts is set
};

struct DfdOptions {
  double gap_tolerance = 1e-9;
  std::size_t max_rounds = 200;
  MasterOptions master;
  bool keep_cuts = false;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Benders iteration cap reached; carries the best incumbent seen.
class DfdError : public SolverError {
 public:
  DfdError(const std::string& what, Design best, double best_objective, double gap)
      : SolverError(what), best(std::move(best)), best_objective(best_objective), gap(gap) {}
  Design best;
  double best_objective;
  double gap;
};

/// Input exceeds an enumeration or enumeration-style cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sum beta z + sum_{r in trips} p_r g_r(z), accumulated in arc then trip order.
double dfd_objective(const Instance& inst, const TripSet& trips, const Design& z);

/// Trips whose route is the direct shuttle leg under every design: those
/// routed directly even with every candidate arc open.
bool always_direct(const Instance& inst, const Trip& trip);

/// Optimal fixed-demand design for `trips` with the arcs of `fixed` forced open.
DfdSolution solve_dfd(const Instance& inst, const TripSet& trips, const Design& fixed,
                      const DfdOptions& options = {});

inline constexpr std::size_t kEnumerationArcCap = 16;

/// Exhaustive oracle; ties go to the canonically first design.
DfdSolution enumerate_dfd(const Instance& inst, const TripSet& trips, const Design& fixed,
                          double tolerance = 1e-9);

/// All weakly connected designs containing `fixed`, in canonical order.
std::vector<Design> enumerate_designs(const Instance& inst, const Design& fixed);

/// a <= b within relative tolerance (absolute below magnitude 1).
inline bool leq_tol(double a, double b, double rel) {
  const double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  return a <= b + rel * scale;
}

}  // namespace odmts
