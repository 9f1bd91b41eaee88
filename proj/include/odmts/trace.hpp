#pragma once

#include <string>
#include <vector>

#include "odmts/adoption.hpp"
#include "odmts/design.hpp"
#include "odmts/instance.hpp"

namespace odmts {

/// One heuristic iteration. Wall time is kept apart from the deterministic fields.
struct TraceRecord {
  std::string stage;       // grad | grre | gagr | init | s1 | s2 | ...
  std::size_t outer = 0;   // outer iteration for nested runs, else 0
  std::size_t k = 0;
  std::size_t t_hat_size = 0;
  std::string design;      // fingerprint
  Design z;                // the design itself
  std::size_t open_arcs = 0;
  double objective = 0.0;  // eval(z)
  std::size_t adopters = 0;
  double r_false = 0.0;
  double a_false = 0.0;
  std::size_t admitted = 0;  // latent trips added to the trip set this iteration
  std::vector<TripIndex> admitted_trips;
  std::size_t cycles = 0;    // arc-based only
  double wall_ms = 0.0;
};

struct HeuristicResult {
  Design design;
  TripSet t_hat;
  DesignEvaluation evaluation;  // of `design` against `t_hat`
  std::vector<TraceRecord> trace;
  bool truncated = false;       // an iteration cap or time limit cut the run short
  std::size_t dfd_solves = 0;   // distinct DFD problems solved
};

/// Number of distinct design fingerprints in a trace.
std::size_t distinct_designs(const std::vector<TraceRecord>& trace);

}  // namespace odmts
