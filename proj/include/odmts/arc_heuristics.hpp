#pragma once

#include <string>

#include "odmts/cycles.hpp"
#include "odmts/trip_heuristics.hpp"

namespace odmts {

enum class Rule { a, b, c, d };

/// "a".."d"; throws std::invalid_argument otherwise.
Rule parse_rule(const std::string& id);
char rule_id(Rule r);

/// Travel-time bound for `trip` under any design containing the one that
/// produced `route`:
///   t1 + (1 - theta)/theta * omega * max(0, shuttle_km - min_hub_access_km).
/// Throws std::domain_error when theta is 0.
double adoption_ub(const Instance& inst, const Trip& trip, const Route& route);

/// Latent trips selected by `rule` from the adopters of the evaluated design,
/// ascending by index.
///   a: every adopter
///   b: adopters whose shuttle dollars do not exceed the fare
///   c: adopters not served by a single direct shuttle leg
///   d: adopters whose bound does not exceed alpha * t_cur
std::vector<TripIndex> expand(Rule rule, const Instance& inst, const DesignEvaluation& ev);

/// Greedy cycle fixing with one expansion rule.
HeuristicResult arc_s1(const Instance& inst, Rule rule, const Design& fixed_init, DfdCache* cache = nullptr);

/// arc-S1 with `first` to convergence, then continued with `second`. The
/// second stage starts by expanding the trip set with `second` on the design
/// reached by the first. `first` must not be rule a.
HeuristicResult arc_s2(const Instance& inst, Rule first, Rule second, const Design& fixed_init,
                       DfdCache* cache = nullptr);

}  // namespace odmts
