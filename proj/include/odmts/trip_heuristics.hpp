#pragma once

#include <map>
#include <optional>
#include <utility>

#include "odmts/dfd.hpp"
#include "odmts/trace.hpp"

namespace odmts {

/// Memo of fixed-demand solves keyed by (trip set, fixed arcs).
class DfdCache {
 public:
  DfdCache(const Instance& inst, DfdOptions options = {}) : inst_(inst), options_(options) {}
  const DfdSolution& solve(const TripSet& trips, const Design& fixed);
  std::size_t size() const { return memo_.size(); }

 private:
  const Instance& inst_;
  DfdOptions options_;
  std::map<std::pair<TripSet, std::vector<std::uint8_t>>, DfdSolution> memo_;
};

/// Default step size: max(1, floor(|T'| / 20)).
std::size_t default_step(const Instance& inst);

/// Adopting latent trips outside `excluded`, ordered by net cost then trip id.
std::vector<TripIndex> ranked_adopters(const Instance& inst, const DesignEvaluation& ev,
                                       const std::vector<char>& excluded);

struct GradOptions {
  std::size_t rho = 1;
  std::optional<std::size_t> max_iterations;  // default |T'| / rho + 10
};

class HeuristicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

HeuristicResult rho_grad(const Instance& inst, const GradOptions& options, const Design& fixed,
                         DfdCache* cache = nullptr);

struct GrreOptions {
  std::size_t eta = 1;
  std::size_t max_iterations = 100;
  bool stop_on_repeat = false;  // end once any design recurs after k >= 2
};

/// Returns the minimum-eval design seen. `start` replaces the core trip set in
/// the first iteration only.
HeuristicResult eta_grre(const Instance& inst, const GrreOptions& options, const Design& fixed,
                         const std::optional<TripSet>& start = std::nullopt, DfdCache* cache = nullptr);

struct GagrOptions {
  std::size_t rho = 1;
  GrreOptions inner;
  double time_limit_s = 300.0;  // checked between inner runs
  std::optional<std::size_t> max_iterations;
};

HeuristicResult rho_gagr(const Instance& inst, const GagrOptions& options, const Design& fixed,
                         DfdCache* cache = nullptr);

}  // namespace odmts
