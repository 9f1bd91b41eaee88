#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "odmts/design.hpp"
#include "odmts/instance.hpp"

namespace odmts {

/// Elementary directed cycle over hubs, starting at its smallest hub.
struct Cycle {
  std::vector<HubIndex> hubs;

  /// Consecutive pairs, closing back to the first hub.
  std::vector<HubArc> arcs() const;
  bool operator==(const Cycle&) const = default;
};

/// Shorter first, then lexicographic hub sequence.
bool cycle_before(const Cycle& a, const Cycle& b);

class CycleCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kCycleCap = 100'000;

/// Every elementary cycle of the digraph on `hub_count` nodes, each once, in
/// cycle_before order. Johnson's circuit enumeration.
std::vector<Cycle> find_cycles(std::size_t hub_count, const std::vector<HubArc>& arcs,
                               std::size_t cap = kCycleCap);

/// Cycles of the open arcs of z.
std::vector<Cycle> find_cycles(const Instance& inst, const Design& z, std::size_t cap = kCycleCap);

/// Design with exactly the cycle's arcs open. Every arc must be a candidate.
Design cycle_design(const Instance& inst, const Cycle& c);

}  // namespace odmts
