#include "odmts/arc_heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "odmts/parallel.hpp"

namespace odmts {

Rule parse_rule(const std::string& id) {
  if (id == "a") return Rule::a;
  if (id == "b") return Rule::b;
  if (id == "c") return Rule::c;
  if (id == "d") return Rule::d;
  throw std::invalid_argument("unknown expansion rule '" + id + "'");
}

char rule_id(Rule r) { return static_cast<char>('a' + static_cast<int>(r)); }

double adoption_ub(const Instance& inst, const Trip& trip, const Route& route) {
  const CostParams& p = inst.params();
  if (p.theta == 0.0) throw std::domain_error("adoption bound undefined for theta = 0");
  const double floor_km = min_hub_access_km(inst, trip);
  if (!std::isfinite(floor_km)) return route.f;
  const double slack = std::max(0.0, route.shuttle_km - floor_km);
  return route.f + (1.0 - p.theta) / p.theta * p.omega * slack;
}

std::vector<TripIndex> expand(Rule rule, const Instance& inst, const DesignEvaluation& ev) {
  std::vector<TripIndex> out;
  for (TripIndex r = 0; r < inst.trips().size(); ++r) {
    const Trip& t = inst.trip(r);
    if (!t.is_latent() || !ev.adopts[r]) continue;
    const Route& route = ev.routes[r];
    bool take = false;
    switch (rule) {
      case Rule::a:
        take = true;
        break;
      case Rule::b:
        take = route.money <= inst.params().ticket;
        break;
      case Rule::c:
        take = !route.is_direct_shuttle();
        break;
      case Rule::d:
        take = adoption_ub(inst, t, route) <= t.alpha * t.t_cur;
        break;
    }
    if (take) out.push_back(r);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct ArcState {
  Design z_fixed;
  TripSet t_bar;
  double bound = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
};

std::size_t absorb(TripSet& t_bar, const std::vector<TripIndex>& add, std::vector<TripIndex>* added) {
  std::size_t count = 0;
  for (TripIndex r : add) {
    auto it = std::lower_bound(t_bar.begin(), t_bar.end(), r);
    if (it != t_bar.end() && *it == r) continue;
    t_bar.insert(it, r);
    if (added) added->push_back(r);
    ++count;
  }
  return count;
}

TraceRecord record(const Instance& inst, const char* stage, const ArcState& s, const DesignEvaluation& ev) {
  TraceRecord rec;
  rec.stage = stage;
  rec.k = s.k;
  rec.t_hat_size = s.t_bar.size();
  rec.design = fingerprint(inst, s.z_fixed);
  rec.z = s.z_fixed;
  rec.open_arcs = s.z_fixed.open_count();
  rec.objective = ev.objective;
  rec.adopters = ev.adopters.size();
  rec.r_false = ev.r_false;
  rec.a_false = ev.a_false;
  return rec;
}

void run_stage(const Instance& inst, Rule rule, const char* stage, ArcState& s, DfdCache& dfd,
               std::vector<TraceRecord>& trace) {
  while (true) {
    const auto t0 = Clock::now();
    const Design& z_temp = dfd.solve(s.t_bar, s.z_fixed).design;
    const std::vector<Cycle> cycles = find_cycles(inst, z_temp.minus(s.z_fixed));
    if (cycles.empty()) break;

    std::vector<double> obj(cycles.size());
    const auto n = static_cast<std::ptrdiff_t>(cycles.size());
    detail::ErrorSlot errors(cycles.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        obj[i] = eval_design_serial(inst, s.z_fixed.united(cycle_design(inst, cycles[i])), {}).objective;
      } catch (...) {
        errors.capture(static_cast<std::size_t>(i));
      }
    }
    errors.rethrow_first();

    // cycles arrive in (length, hub sequence) order, so the first minimum wins ties
    const std::size_t best = static_cast<std::size_t>(std::min_element(obj.begin(), obj.end()) - obj.begin());
    if (!(obj[best] < s.bound)) break;

    s.bound = obj[best];
    s.z_fixed = s.z_fixed.united(cycle_design(inst, cycles[best]));
    DesignEvaluation ev = eval_design(inst, s.z_fixed, {});
    std::vector<TripIndex> added;
    const std::size_t admitted = absorb(s.t_bar, expand(rule, inst, ev), &added);
    ++s.k;
    set_false_rates(inst, ev, s.t_bar);

    TraceRecord rec = record(inst, stage, s, ev);
    rec.admitted = admitted;
    rec.admitted_trips = std::move(added);
    rec.cycles = cycles.size();
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    trace.push_back(std::move(rec));
  }
}

HeuristicResult run_arc(const Instance& inst, const std::vector<std::pair<Rule, const char*>>& stages,
                        const Design& fixed_init, DfdCache* cache) {
  validate_design(inst, fixed_init);
  DfdCache local(inst);
  DfdCache& dfd = cache ? *cache : local;

  ArcState s;
  s.z_fixed = fixed_init;
  s.t_bar = inst.core_trips();
  HeuristicResult res;
  res.trace.push_back(record(inst, "init", s, eval_design(inst, s.z_fixed, s.t_bar)));

  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i > 0) {
      // a new stage first widens the trip set under its own rule
      const DesignEvaluation ev = eval_design(inst, s.z_fixed, {});
      absorb(s.t_bar, expand(stages[i].first, inst, ev), nullptr);
    }
    run_stage(inst, stages[i].first, stages[i].second, s, dfd, res.trace);
  }

  res.design = s.z_fixed;
  DesignEvaluation ev = eval_design(inst, s.z_fixed, {});
  // Without an accepted cycle the returned design never had its adopters
  // expanded; close the trip set under the last rule. A no-op otherwise.
  absorb(s.t_bar, expand(stages.back().first, inst, ev), nullptr);
  set_false_rates(inst, ev, s.t_bar);
  res.t_hat = s.t_bar;
  res.evaluation = std::move(ev);
  res.dfd_solves = dfd.size();
  return res;
}

}  // namespace

HeuristicResult arc_s1(const Instance& inst, Rule rule, const Design& fixed_init, DfdCache* cache) {
  return run_arc(inst, {{rule, "s1"}}, fixed_init, cache);
}

HeuristicResult arc_s2(const Instance& inst, Rule first, Rule second, const Design& fixed_init, DfdCache* cache) {
  if (first == Rule::a) throw std::invalid_argument("the first arc-S2 stage must not use rule a");
  return run_arc(inst, {{first, "s1"}, {second, "s2"}}, fixed_init, cache);
}

}  // namespace odmts
