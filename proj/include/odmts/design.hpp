#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "odmts/instance.hpp"

namespace odmts {

/// Open/closed state of every candidate hub arc (z_hl).
class Design {
 public:
  Design() = default;
  explicit Design(std::size_t arc_count) : open_(arc_count, 0) {}

  /// Empty design for `inst` with its fixed (backbone) arcs opened.
  static Design with_fixed_arcs(const Instance& inst);

  std::size_t arc_count() const { return open_.size(); }
  bool is_open(ArcIndex a) const { return open_[a] != 0; }
  void set(ArcIndex a, bool open) { open_[a] = open ? 1 : 0; }
  std::size_t open_count() const;
  std::vector<ArcIndex> open_arcs() const;

  /// Componentwise z <= other.
  bool subset_of(const Design& other) const;
  /// Arcs open here or in `other`.
  Design united(const Design& other) const;
  /// Arcs open here but not in `other`.
  Design minus(const Design& other) const;

  bool operator==(const Design&) const = default;

  const std::vector<std::uint8_t>& bits() const { return open_; }

 private:
  std::vector<std::uint8_t> open_;
};

/// Canonical design order: the 0/1 vectors over candidate arcs compared
/// lexicographically with 0 < 1, so the empty design comes first.
bool canonically_before(const Design& a, const Design& b);

/// Equal in- and out-degree of open arcs at every hub.
bool is_weakly_connected(const Instance& inst, const Design& z);

/// Throws ValidationError unless `z` is sized for `inst`, weakly connected
/// and contains every fixed arc.
void validate_design(const Instance& inst, const Design& z);

/// Stable human-readable fingerprint, e.g. "3>5|5>3" using stop ids; "-" when empty.
std::string fingerprint(const Instance& inst, const Design& z);

/// Sum of beta over open arcs.
double investment(const Instance& inst, const Design& z);

}  // namespace odmts
