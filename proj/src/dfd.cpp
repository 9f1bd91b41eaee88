#include "odmts/dfd.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <map>

#include "odmts/parallel.hpp"

namespace odmts {

// ---------------------------------------------------------------------------
// Cuts

double BendersCut::coeff_of(ArcIndex a) const {
  auto it = std::lower_bound(coeff.begin(), coeff.end(), a,
                             [](const std::pair<ArcIndex, double>& c, ArcIndex x) { return c.first < x; });
  return it != coeff.end() && it->first == a ? it->second : 0.0;
}

double BendersCut::value(const Design& z) const {
  double v = base - slack;
  for (auto [a, c] : coeff) {
    if (z.is_open(a)) v -= c;
  }
  return v;
}

BendersCut make_cut(const Instance& inst, TripIndex trip, const Design& z) {
  const Trip& r = inst.trip(trip);
  const std::vector<double> to_go = cost_to_destination(inst, r, z);
  const Matrix& tau = inst.weights().tau;

  BendersCut cut;
  cut.trip = trip;
  cut.base = to_go[r.origin];
  for (ArcIndex a = 0; a < inst.arc_count(); ++a) {
    if (z.is_open(a)) continue;
    const HubArc arc = inst.arcs()[a];
    const double reduced = to_go[inst.hub_stop(arc.from)] - tau(arc.from, arc.to) - to_go[inst.hub_stop(arc.to)];
    // g_r >= 0, so a coefficient above the base never tightens anything
    const double c = std::min(cut.base, reduced);
    if (c > 0.0) cut.coeff.emplace_back(a, c);
  }
  double mag = cut.base;
  for (auto [a, c] : cut.coeff) mag += c;
  cut.slack = 1e-12 * mag;
  return cut;
}

std::vector<BendersCut> make_cuts_serial(const Instance& inst, const TripSet& trips, const Design& z) {
  std::vector<BendersCut> out;
  out.reserve(trips.size());
  for (TripIndex r : trips) out.push_back(make_cut(inst, r, z));
  return out;
}

std::vector<BendersCut> make_cuts(const Instance& inst, const TripSet& trips, const Design& z) {
  const auto n = static_cast<std::ptrdiff_t>(trips.size());
  std::vector<BendersCut> out(trips.size());
  detail::ErrorSlot errors(trips.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = make_cut(inst, trips[i], z);
    } catch (...) {
      errors.capture(static_cast<std::size_t>(i));
    }
  }
  errors.rethrow_first();
  return out;
}

namespace {

std::string cut_key(const BendersCut& cut) {
  std::string key;
  auto put = [&key](const void* p, std::size_t n) { key.append(static_cast<const char*>(p), n); };
  put(&cut.trip, sizeof cut.trip);
  put(&cut.base, sizeof cut.base);
  put(&cut.slack, sizeof cut.slack);
  for (const auto& [a, c] : cut.coeff) {
    put(&a, sizeof a);
    put(&c, sizeof c);
  }
  return key;
}

}  // namespace

bool CutPool::add(BendersCut cut) {
  if (!keys_.insert(cut_key(cut)).second) return false;
  cuts_.push_back(std::move(cut));
  return true;
}

// ---------------------------------------------------------------------------
// Master

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using State = std::vector<std::uint8_t>;
constexpr std::uint8_t kClosed = 0;
constexpr std::uint8_t kOpen = 1;
constexpr std::uint8_t kFree = 2;

/// Min-cost completion of a partial design to a weakly connected one, with
/// linear costs on the free arcs. Unit capacities make the flow integral.
/// Successive shortest paths after saturating the negative arcs.
class Circulation {
 public:
  Circulation(const Instance& inst) : hubs_(inst.hub_count()), arcs_(inst.arcs()) {}

  /// False when no completion exists. On success `total` is the free-arc cost
  /// and `completion` the state with every free arc decided.
  bool solve(const State& s, const std::vector<double>& cost, double& total, State& completion) {
    const std::size_t n = hubs_ + 2;
    const std::size_t src = hubs_, sink = hubs_ + 1;
    edges_.clear();
    head_.assign(n, {});
    std::vector<long> balance(hubs_, 0);
    completion = s;
    total = 0.0;
    for (ArcIndex a = 0; a < arcs_.size(); ++a) {
      const HubArc arc = arcs_[a];
      if (s[a] == kOpen) {
        ++balance[arc.to];
        --balance[arc.from];
      } else if (s[a] == kFree) {
        if (cost[a] < 0.0) {
          total += cost[a];
          completion[a] = kOpen;
          --balance[arc.from];
          ++balance[arc.to];
          add(arc.to, arc.from, -cost[a], a);
        } else {
          completion[a] = kClosed;
          add(arc.from, arc.to, cost[a], a);
        }
      }
    }
    long supply = 0;
    for (HubIndex v = 0; v < hubs_; ++v) {
      if (balance[v] > 0) {
        add(src, v, 0.0, kNoArc, static_cast<int>(balance[v]));
        supply += balance[v];
      } else if (balance[v] < 0) {
        add(v, sink, 0.0, kNoArc, static_cast<int>(-balance[v]));
      }
    }

    std::vector<double> dist(n);
    std::vector<std::size_t> via(n);
    while (supply > 0) {
      // Bellman-Ford; residual costs stay free of negative cycles
      std::fill(dist.begin(), dist.end(), kInf);
      dist[src] = 0.0;
      for (std::size_t iter = 0; iter < n; ++iter) {
        bool changed = false;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
          const Edge& ed = edges_[e];
          if (ed.cap <= 0 || dist[ed.from] == kInf) continue;
          const double nd = dist[ed.from] + ed.cost;
          if (nd < dist[ed.to]) {
            dist[ed.to] = nd;
            via[ed.to] = e;
            changed = true;
          }
        }
        if (!changed) break;
      }
      if (dist[sink] == kInf) return false;
      int push = std::numeric_limits<int>::max();
      for (std::size_t v = sink; v != src; v = edges_[via[v]].from) push = std::min(push, edges_[via[v]].cap);
      push = static_cast<int>(std::min<long>(push, supply));
      for (std::size_t v = sink; v != src; v = edges_[via[v]].from) {
        Edge& ed = edges_[via[v]];
        ed.cap -= push;
        edges_[ed.rev].cap += push;
        if (ed.arc != kNoArc) {
          // forward use of an arc flips its decision
          completion[ed.arc] = completion[ed.arc] == kOpen ? kClosed : kOpen;
        }
      }
      total += push * dist[sink];
      supply -= push;
    }
    return true;
  }

 private:
  static constexpr ArcIndex kNoArc = std::numeric_limits<ArcIndex>::max();
  struct Edge {
    std::size_t from, to;
    int cap;
    double cost;
    std::size_t rev;
    ArcIndex arc;
  };

  void add(std::size_t u, std::size_t v, double cost, ArcIndex arc, int cap = 1) {
    edges_.push_back({u, v, cap, cost, edges_.size() + 1, arc});
    edges_.push_back({v, u, 0, -cost, edges_.size() - 1, arc});
    (void)head_;
  }

  std::size_t hubs_;
  const std::vector<HubArc>& arcs_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> head_;
};

class MasterSearch {
 public:
  MasterSearch(const Instance& inst, const CutPool& pool, const Design& fixed, double constant,
               const MasterOptions& options)
      : inst_(inst), pool_(pool), fixed_(fixed), constant_(constant), options_(options), flow_(inst) {
    std::map<TripIndex, std::size_t> slot_of;
    for (const BendersCut& c : pool.cuts()) {
      auto [it, inserted] = slot_of.emplace(c.trip, slot_weight_.size());
      if (inserted) slot_weight_.push_back(inst.trip(c.trip).riders);
      cut_slot_.push_back(it->second);
    }
  }

  State root() const {
    State s(inst_.arc_count(), kFree);
    for (ArcIndex a = 0; a < s.size(); ++a) {
      if (fixed_.is_open(a)) s[a] = kOpen;
    }
    return s;
  }

  static State from_design(const Design& z) {
    State s(z.arc_count());
    for (ArcIndex a = 0; a < s.size(); ++a) s[a] = z.is_open(a) ? kOpen : kClosed;
    return s;
  }

  static Design to_design(const State& s) {
    Design z(s.size());
    for (ArcIndex a = 0; a < s.size(); ++a) z.set(a, s[a] == kOpen);
    return z;
  }

  /// Narrows free arcs using the degree balance at every hub. False when no
  /// balanced completion exists.
  bool propagate(State& s) const {
    const std::size_t hubs = inst_.hub_count();
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<long> out_open(hubs, 0), out_free(hubs, 0), in_open(hubs, 0), in_free(hubs, 0);
      for (ArcIndex a = 0; a < s.size(); ++a) {
        const HubArc arc = inst_.arcs()[a];
        if (s[a] == kOpen) {
          ++out_open[arc.from];
          ++in_open[arc.to];
        } else if (s[a] == kFree) {
          ++out_free[arc.from];
          ++in_free[arc.to];
        }
      }
      std::vector<std::int8_t> force_out(hubs, -1), force_in(hubs, -1);
      for (HubIndex h = 0; h < hubs; ++h) {
        const long max_out = out_open[h] + out_free[h];
        const long max_in = in_open[h] + in_free[h];
        if (max_out < in_open[h] || max_in < out_open[h]) return false;
        if (out_free[h] + in_free[h] == 0) continue;
        if (max_out == in_open[h]) {
          force_out[h] = kOpen;
          force_in[h] = kClosed;
        } else if (max_in == out_open[h]) {
          force_in[h] = kOpen;
          force_out[h] = kClosed;
        }
      }
      for (ArcIndex a = 0; a < s.size(); ++a) {
        if (s[a] != kFree) continue;
        const HubArc arc = inst_.arcs()[a];
        const std::int8_t by_from = force_out[arc.from];
        const std::int8_t by_to = force_in[arc.to];
        if (by_from >= 0 && by_to >= 0 && by_from != by_to) return false;
        const std::int8_t f = by_from >= 0 ? by_from : by_to;
        if (f >= 0) {
          s[a] = static_cast<std::uint8_t>(f);
          changed = true;
        }
      }
    }
    return true;
  }

  /// Master objective of a fully decided state.
  double leaf_value(const State& s) const {
    const auto& beta = inst_.weights().beta;
    double v = constant_;
    for (ArcIndex a = 0; a < s.size(); ++a) {
      if (s[a] == kOpen) v += beta[a];
    }
    std::vector<double> best(slot_weight_.size(), 0.0);
    const auto& cuts = pool_.cuts();
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      double rhs = cuts[c].base - cuts[c].slack;
      for (auto [a, coeff] : cuts[c].coeff) {
        if (s[a] == kOpen) rhs -= coeff;
      }
      best[cut_slot_[c]] = std::max(best[cut_slot_[c]], rhs);
    }
    for (std::size_t k = 0; k < best.size(); ++k) v += slot_weight_[k] * best[k];
    return v;
  }

  struct NodeInfo {
    double bound = kInf;
    std::vector<double> savings;
    State completion;  // a weakly connected completion, valid when bound is finite
  };

  /// Lower bound over all weakly connected completions of `s`; +inf when none exists.
  ///
  /// Two bounds, keeping the larger. Optimistic: every free arc counted open in
  /// the cuts and closed in the investment. Linear: per trip the cut with the
  /// largest value on the open arcs, truncated so that max(0, .) is bounded
  /// below by an affine function, whose free-arc part is minimized over
  /// balanced completions as a circulation.
  NodeInfo bound(const State& s) {
    NodeInfo info;
    const auto& beta = inst_.weights().beta;
    double open_beta = 0.0;
    for (ArcIndex a = 0; a < s.size(); ++a) {
      if (s[a] == kOpen) open_beta += beta[a];
    }
    const std::size_t slots = slot_weight_.size();
    std::vector<double> best_opt(slots, -kInf), best_pess(slots, -kInf);
    std::vector<std::size_t> best_cut(slots, 0);
    const auto& cuts = pool_.cuts();
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      double pess = cuts[c].base - cuts[c].slack;
      double free_sum = 0.0;
      for (auto [a, coeff] : cuts[c].coeff) {
        if (s[a] == kOpen) {
          pess -= coeff;
        } else if (s[a] == kFree) {
          free_sum += coeff;
        }
      }
      const std::size_t slot = cut_slot_[c];
      best_opt[slot] = std::max(best_opt[slot], pess - free_sum);
      if (pess > best_pess[slot]) {
        best_pess[slot] = pess;
        best_cut[slot] = c;
      }
    }

    double optimistic = open_beta + constant_;
    double linear = open_beta + constant_;
    std::vector<double>& save = info.savings;
    save.assign(s.size(), 0.0);
    for (std::size_t k = 0; k < slots; ++k) {
      const double p = slot_weight_[k];
      optimistic += p * std::max(0.0, best_opt[k]);
      const double pess = best_pess[k];
      if (pess <= 0.0) continue;
      linear += p * pess;
      for (auto [a, coeff] : cuts[best_cut[k]].coeff) {
        if (s[a] == kFree) save[a] += p * std::min(coeff, pess);
      }
    }
    std::vector<double> cost(s.size(), 0.0);
    for (ArcIndex a = 0; a < s.size(); ++a) {
      if (s[a] == kFree) cost[a] = beta[a] - save[a];
    }
    double completion_cost = 0.0;
    if (!flow_.solve(s, cost, completion_cost, info.completion)) return info;
    info.bound = std::max(optimistic, linear + completion_cost);
    return info;
  }

  double value(const Design& z) const { return leaf_value(from_design(z)); }

  MasterResult run(const std::vector<Design>& hints) {
    State start = root();
    std::vector<Design> seeds = hints;
    seeds.push_back(fixed_);
    for (const Design& h : seeds) {
      if (h.arc_count() != inst_.arc_count() || !fixed_.subset_of(h) || !is_weakly_connected(inst_, h)) continue;
      offer(from_design(h));
    }
    optimize(start);
    if (best_ == kInf) throw SolverError("master problem infeasible");

    const double target = best_ + options_.tolerance * std::max(1.0, std::abs(best_));
    State found;
    if (!first_within(start, target, found)) {
      // Rounding can push every leaf just above the target; fall back to the exact incumbent.
      found = best_state_;
    }
    MasterResult result;
    result.design = to_design(found);
    result.lower_bound = leaf_value(found);
    result.nodes = nodes_;
    return result;
  }

 private:
  void count_node() {
    if (++nodes_ > options_.node_limit) throw CapacityError("master branch-and-bound node limit exceeded");
  }

  void offer(const State& leaf) {
    const double v = leaf_value(leaf);
    if (v < best_) {
      best_ = v;
      best_state_ = leaf;
    }
  }

  void optimize(State s) {
    count_node();
    if (!propagate(s)) return;
    NodeInfo info = bound(s);
    if (info.bound >= best_) return;
    offer(info.completion);

    ArcIndex pick = s.size();
    for (ArcIndex a = 0; a < s.size(); ++a) {
      if (s[a] != kFree) continue;
      if (pick == s.size() || info.savings[a] > info.savings[pick]) pick = a;
    }
    if (pick == s.size()) return;
    const bool open_first = info.completion[pick] == kOpen;
    State first = s;
    State second = std::move(s);
    first[pick] = open_first ? kOpen : kClosed;
    second[pick] = open_first ? kClosed : kOpen;
    optimize(std::move(first));
    optimize(std::move(second));
  }

  bool first_within(State s, double target, State& found) {
    count_node();
    if (!propagate(s)) return false;
    const auto it = std::find(s.begin(), s.end(), kFree);
    if (it == s.end()) {
      if (leaf_value(s) > target) return false;
      found = s;
      return true;
    }
    if (bound(s).bound > target) return false;
    State zero = s;
    zero[static_cast<std::size_t>(it - s.begin())] = kClosed;
    if (first_within(std::move(zero), target, found)) return true;
    s[static_cast<std::size_t>(it - s.begin())] = kOpen;
    return first_within(std::move(s), target, found);
  }

  const Instance& inst_;
  const CutPool& pool_;
  const Design& fixed_;
  double constant_;
  MasterOptions options_;
  Circulation flow_;
  std::vector<double> slot_weight_;
  std::vector<std::size_t> cut_slot_;
  double best_ = kInf;
  State best_state_;
  std::size_t nodes_ = 0;
};

}  // namespace

MasterResult solve_master(const Instance& inst, const CutPool& pool, const Design& fixed, double constant,
                          const std::vector<Design>& hints, const MasterOptions& options) {
  if (!is_weakly_connected(inst, fixed)) throw ValidationError("fixed arcs violate weak connectivity");
  MasterSearch search(inst, pool, fixed, constant, options);
  return search.run(hints);
}

double master_value(const Instance& inst, const CutPool& pool, const Design& z, double constant) {
  MasterSearch search(inst, pool, z, constant, {});
  return search.value(z);
}

// ---------------------------------------------------------------------------
// Benders loop

double dfd_objective(const Instance& inst, const TripSet& trips, const Design& z) {
  const auto routes = route_batch(inst, trips, z);
  double total = investment(inst, z);
  for (std::size_t k = 0; k < trips.size(); ++k) total += inst.trip(trips[k]).riders * routes[k].g;
  return total;
}

bool always_direct(const Instance& inst, const Trip& trip) {
  Design all(inst.arc_count());
  for (ArcIndex a = 0; a < inst.arc_count(); ++a) all.set(a, true);
  return route(inst, trip, all).is_direct_shuttle();
}

namespace {

DfdSolution finish(const Instance& inst, const TripSet& trips, Design z) {
  DfdSolution sol;
  sol.routes = route_batch(inst, trips, z);
  double total = investment(inst, z);
  for (std::size_t k = 0; k < trips.size(); ++k) total += inst.trip(trips[k]).riders * sol.routes[k].g;
  sol.objective = total;
  sol.trips = trips;
  sol.design = std::move(z);
  return sol;
}

}  // namespace

DfdSolution solve_dfd(const Instance& inst, const TripSet& trips, const Design& fixed, const DfdOptions& options) {
  for (TripIndex r : trips) {
    if (r >= inst.trips().size()) throw ValidationError("trip set is not a subset of the instance trips");
  }
  if (fixed.arc_count() != inst.arc_count() || !is_weakly_connected(inst, fixed)) {
    throw ValidationError("fixed arcs violate weak connectivity");
  }

  // Trips routed directly under every design contribute a constant.
  TripSet cut_trips;
  double constant = 0.0;
  {
    std::vector<char> direct(trips.size(), 0);
    const auto n = static_cast<std::ptrdiff_t>(trips.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < n; ++k) direct[k] = always_direct(inst, inst.trip(trips[k])) ? 1 : 0;
    for (std::size_t k = 0; k < trips.size(); ++k) {
      const Trip& r = inst.trip(trips[k]);
      if (direct[k]) {
        constant += r.riders * inst.weights().gamma(r.origin, r.destination);
      } else {
        cut_trips.push_back(trips[k]);
      }
    }
  }

  if (cut_trips.empty()) {
    DfdSolution sol = finish(inst, trips, fixed);
    sol.rounds.push_back({1, sol.objective, sol.objective, fixed.open_count(), 0});
    sol.iterations = 1;
    return sol;
  }

  CutPool pool;
  std::vector<Design> visited;
  Design incumbent = fixed;
  double upper = kInf;
  std::vector<RoundLog> log;

  for (std::size_t round = 1; round <= options.max_rounds; ++round) {
    const MasterResult master = solve_master(inst, pool, fixed, constant, visited, options.master);
    const Design& z = master.design;

    const auto routes = route_batch(inst, cut_trips, z);
    double value = investment(inst, z) + constant;
    for (std::size_t k = 0; k < cut_trips.size(); ++k) value += inst.trip(cut_trips[k]).riders * routes[k].g;
    if (value < upper || (value == upper && canonically_before(z, incumbent))) {
      upper = value;
      incumbent = z;
    }

    RoundLog entry{round, master.lower_bound, upper, z.open_count(), 0};
    if (leq_tol(value, master.lower_bound, options.gap_tolerance)) {
      log.push_back(entry);
      DfdSolution sol = finish(inst, trips, z);
      sol.rounds = std::move(log);
      sol.iterations = round;
      if (options.keep_cuts) sol.cuts = pool.cuts();
      return sol;
    }

    for (BendersCut& cut : make_cuts(inst, cut_trips, z)) {
      if (pool.add(std::move(cut))) ++entry.cuts_added;
    }
    log.push_back(entry);
    visited.push_back(z);
  }

  const double lower = log.empty() ? 0.0 : log.back().lower;
  throw DfdError("Benders round cap exceeded", incumbent, upper,
                 (upper - lower) / std::max(1.0, std::abs(upper)));
}

// ---------------------------------------------------------------------------
// Enumeration oracle

std::vector<Design> enumerate_designs(const Instance& inst, const Design& fixed) {
  std::vector<ArcIndex> free;
  for (ArcIndex a = 0; a < inst.arc_count(); ++a) {
    if (!fixed.is_open(a)) free.push_back(a);
  }
  if (free.size() > kEnumerationArcCap) {
    throw CapacityError("design enumeration limited to " + std::to_string(kEnumerationArcCap) + " free arcs");
  }
  std::vector<Design> out;
  const std::size_t k = free.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Design z = fixed;
    // the lowest free arc is the most significant bit, so masks ascend in canonical order
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << (k - 1 - i))) z.set(free[i], true);
    }
    if (is_weakly_connected(inst, z)) out.push_back(std::move(z));
  }
  return out;
}

DfdSolution enumerate_dfd(const Instance& inst, const TripSet& trips, const Design& fixed, double tolerance) {
  const std::vector<Design> designs = enumerate_designs(inst, fixed);
  std::vector<double> values;
  values.reserve(designs.size());
  for (const Design& z : designs) values.push_back(dfd_objective(inst, trips, z));
  const double best = *std::min_element(values.begin(), values.end());
  std::size_t pick = 0;
  while (!leq_tol(values[pick], best, tolerance)) ++pick;
  DfdSolution sol = finish(inst, trips, designs[pick]);
  sol.iterations = designs.size();
  return sol;
}

}  // namespace odmts
