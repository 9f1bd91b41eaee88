#include "odmts/design.hpp"

#include <algorithm>

namespace odmts {

Design Design::with_fixed_arcs(const Instance& inst) {
  Design z(inst.arc_count());
  for (ArcIndex a : inst.fixed_arcs()) z.set(a, true);
  return z;
}

std::size_t Design::open_count() const {
  return static_cast<std::size_t>(std::count(open_.begin(), open_.end(), std::uint8_t{1}));
}

std::vector<ArcIndex> Design::open_arcs() const {
  std::vector<ArcIndex> out;
  for (ArcIndex a = 0; a < open_.size(); ++a) {
    if (open_[a]) out.push_back(a);
  }
  return out;
}

bool Design::subset_of(const Design& other) const {
  for (ArcIndex a = 0; a < open_.size(); ++a) {
    if (open_[a] && !other.open_[a]) return false;
  }
  return true;
}

Design Design::united(const Design& other) const {
  Design out(*this);
  for (ArcIndex a = 0; a < open_.size(); ++a) out.open_[a] |= other.open_[a];
  return out;
}

Design Design::minus(const Design& other) const {
  Design out(*this);
  for (ArcIndex a = 0; a < open_.size(); ++a) {
    if (other.open_[a]) out.open_[a] = 0;
  }
  return out;
}

bool canonically_before(const Design& a, const Design& b) {
  return std::lexicographical_compare(a.bits().begin(), a.bits().end(), b.bits().begin(), b.bits().end());
}

bool is_weakly_connected(const Instance& inst, const Design& z) {
  std::vector<long> balance(inst.hub_count(), 0);
  for (ArcIndex a : z.open_arcs()) {
    ++balance[inst.arcs()[a].from];
    --balance[inst.arcs()[a].to];
  }
  return std::all_of(balance.begin(), balance.end(), [](long b) { return b == 0; });
}

void validate_design(const Instance& inst, const Design& z) {
  if (z.arc_count() != inst.arc_count()) throw ValidationError("design does not match the instance arc set");
  if (!is_weakly_connected(inst, z)) throw ValidationError("design violates weak connectivity");
  for (ArcIndex a : inst.fixed_arcs()) {
    if (!z.is_open(a)) throw ValidationError("design does not contain every fixed arc");
  }
}

std::string fingerprint(const Instance& inst, const Design& z) {
  std::string out;
  for (ArcIndex a : z.open_arcs()) {
    if (!out.empty()) out += '|';
    out += std::to_string(inst.stop_id(inst.hub_stop(inst.arcs()[a].from)));
    out += '>';
    out += std::to_string(inst.stop_id(inst.hub_stop(inst.arcs()[a].to)));
  }
  return out.empty() ? "-" : out;
}

double investment(const Instance& inst, const Design& z) {
  double total = 0.0;
  for (ArcIndex a = 0; a < z.arc_count(); ++a) {
    if (z.is_open(a)) total += inst.weights().beta[a];
  }
  return total;
}

}  // namespace odmts
