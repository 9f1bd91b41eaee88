#pragma once

#include <string>
#include <vector>

#include "odmts/adoption.hpp"
#include "odmts/dfd.hpp"
#include "odmts/trace.hpp"

namespace odmts {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal that round-trips.
std::string format_number(double v);

std::string design_json(const Instance& inst, const Design& z);
/// Reads the open arcs of a design file written by design_json.
Design parse_design(const Instance& inst, const std::string& text);

/// Trip set stored in an evaluation file; empty when absent.
TripSet parse_t_hat(const Instance& inst, const std::string& evaluation_text);

std::string evaluation_json(const Instance& inst, const DesignEvaluation& ev, const TripSet& t_hat);

/// Header comment line, column line, one row per record. No timings.
std::string trace_csv(const std::vector<TraceRecord>& trace, const std::string& algorithm);
inline constexpr const char* kTraceColumns =
    "algorithm,stage,outer,k,t_hat_size,open_arcs,design,objective,adopters,r_false,a_false,admitted,cycles";

/// Per-record wall times, separate from the deterministic trace.
std::string timing_csv(const std::vector<TraceRecord>& trace);

std::string rounds_csv(const std::vector<RoundLog>& rounds);

}  // namespace odmts
