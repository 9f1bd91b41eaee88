#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odmts/arc_heuristics.hpp"
#include "odmts/trip_heuristics.hpp"

namespace odmts {

enum class Algorithm { dfd, exact, grad, grre, gagr, arc_s1, arc_s2 };

/// dfd | exact | grad | grre | gagr | arc-s1 | arc-s2
Algorithm parse_algorithm(const std::string& id);
std::string algorithm_id(Algorithm a);
const std::vector<Algorithm>& all_algorithms();

struct RunConfig {
  Algorithm algorithm = Algorithm::grad;
  std::optional<std::size_t> rho;  // default_step when empty
  std::optional<std::size_t> eta;
  std::vector<Rule> rules;         // arc-s1: one, arc-s2: two
  double time_limit_s = 300.0;
  bool grre_stop_on_repeat = false;
};

struct RunOutput {
  Design design;
  TripSet t_hat;
  DesignEvaluation evaluation;
  std::vector<TraceRecord> trace;
  std::vector<RoundLog> rounds;  // dfd only
  bool truncated = false;
};

/// Thrown when a run fails after producing a usable incumbent.
class PartialRunError : public std::runtime_error {
 public:
  PartialRunError(const std::string& what, RunOutput partial)
      : std::runtime_error(what), partial(std::move(partial)) {}
  RunOutput partial;
};

/// Runs one algorithm with the instance's fixed arcs forced open. "dfd" solves
/// the fixed-demand problem over every trip, "exact" enumerates designs.
RunOutput run_algorithm(const Instance& inst, const RunConfig& config);

}  // namespace odmts
