#include "odmts/cycles.hpp"

#include <algorithm>
#include <string>

namespace odmts {

std::vector<HubArc> Cycle::arcs() const {
  std::vector<HubArc> out;
  for (std::size_t i = 0; i < hubs.size(); ++i) out.push_back({hubs[i], hubs[(i + 1) % hubs.size()]});
  return out;
}

bool cycle_before(const Cycle& a, const Cycle& b) {
  if (a.hubs.size() != b.hubs.size()) return a.hubs.size() < b.hubs.size();
  return a.hubs < b.hubs;
}

namespace {

class Johnson {
 public:
  Johnson(std::size_t n, const std::vector<HubArc>& arcs, std::size_t cap)
      : n_(n), adj_(n), blocked_(n, 0), blocked_by_(n), cap_(cap) {
    for (const HubArc& a : arcs) {
      if (a.from >= n || a.to >= n) throw std::out_of_range("arc endpoint outside hub range");
      if (a.from != a.to) adj_[a.from].push_back(a.to);
    }
    for (auto& v : adj_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  std::vector<Cycle> run() {
    // Rooting at s and restricting to nodes >= s emits each cycle once, at its smallest node.
    for (start_ = 0; start_ < n_; ++start_) {
      std::fill(blocked_.begin(), blocked_.end(), 0);
      for (auto& b : blocked_by_) b.clear();
      circuit(start_);
    }
    std::sort(out_.begin(), out_.end(), cycle_before);
    return std::move(out_);
  }

 private:
  void unblock(HubIndex u) {
    blocked_[u] = 0;
    std::vector<HubIndex> pending;
    pending.swap(blocked_by_[u]);
    for (HubIndex w : pending) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(HubIndex v) {
    bool found = false;
    stack_.push_back(v);
    blocked_[v] = 1;
    for (HubIndex w : adj_[v]) {
      if (w < start_) continue;
      if (w == start_) {
        if (out_.size() >= cap_) {
          throw CycleCapError("more than " + std::to_string(cap_) +
                              " elementary cycles; use a smaller expansion step");
        }
        out_.push_back(Cycle{stack_});
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (HubIndex w : adj_[v]) {
        if (w < start_) continue;
        auto& list = blocked_by_[w];
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      }
    }
    stack_.pop_back();
    return found;
  }

  std::size_t n_;
  std::vector<std::vector<HubIndex>> adj_;
  std::vector<char> blocked_;
  std::vector<std::vector<HubIndex>> blocked_by_;
  std::vector<HubIndex> stack_;
  std::vector<Cycle> out_;
  HubIndex start_ = 0;
  std::size_t cap_;
};

}  // namespace

std::vector<Cycle> find_cycles(std::size_t hub_count, const std::vector<HubArc>& arcs, std::size_t cap) {
  return Johnson(hub_count, arcs, cap).run();
}

std::vector<Cycle> find_cycles(const Instance& inst, const Design& z, std::size_t cap) {
  std::vector<HubArc> arcs;
  for (ArcIndex a : z.open_arcs()) arcs.push_back(inst.arcs()[a]);
  return find_cycles(inst.hub_count(), arcs, cap);
}

Design cycle_design(const Instance& inst, const Cycle& c) {
  Design z(inst.arc_count());
  for (const HubArc& a : c.arcs()) {
    const auto idx = inst.arc_index(a.from, a.to);
    if (!idx) throw std::invalid_argument("cycle uses a non-candidate arc");
    z.set(*idx, true);
  }
  return z;
}

}  // namespace odmts
