#include "odmts/trip_heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace odmts {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

TraceRecord make_record(const Instance& inst, std::string stage, std::size_t outer, std::size_t k,
                        const TripSet& t_hat, const Design& z, const DesignEvaluation& ev) {
  TraceRecord rec;
  rec.stage = std::move(stage);
  rec.outer = outer;
  rec.k = k;
  rec.t_hat_size = t_hat.size();
  rec.design = fingerprint(inst, z);
  rec.z = z;
  rec.open_arcs = z.open_count();
  rec.objective = ev.objective;
  rec.adopters = ev.adopters.size();
  rec.r_false = ev.r_false;
  rec.a_false = ev.a_false;
  return rec;
}

TripSet with_core(const Instance& inst, const std::vector<TripIndex>& latent) {
  TripSet out = inst.core_trips();
  out.insert(out.end(), latent.begin(), latent.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::size_t distinct_designs(const std::vector<TraceRecord>& trace) {
  std::set<std::string> seen;
  for (const auto& r : trace) seen.insert(r.design);
  return seen.size();
}

const DfdSolution& DfdCache::solve(const TripSet& trips, const Design& fixed) {
  auto key = std::make_pair(trips, fixed.bits());
  auto it = memo_.find(key);
  if (it == memo_.end()) it = memo_.emplace(std::move(key), solve_dfd(inst_, trips, fixed, options_)).first;
  return it->second;
}

std::size_t default_step(const Instance& inst) {
  return std::max<std::size_t>(1, inst.latent_trips().size() / 20);
}

std::vector<TripIndex> ranked_adopters(const Instance& inst, const DesignEvaluation& ev,
                                       const std::vector<char>& excluded) {
  std::vector<std::pair<double, TripIndex>> keyed;
  for (TripIndex r = 0; r < inst.trips().size(); ++r) {
    if (!inst.trip(r).is_latent() || excluded[r] || !ev.adopts[r]) continue;
    keyed.emplace_back(net_cost(ev.routes[r], inst), r);
  }
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return inst.trip(a.second).id < inst.trip(b.second).id;
  });
  std::vector<TripIndex> out;
  for (const auto& kv : keyed) out.push_back(kv.second);
  return out;
}

HeuristicResult rho_grad(const Instance& inst, const GradOptions& options, const Design& fixed, DfdCache* cache) {
  if (options.rho < 1) throw std::invalid_argument("rho must be at least 1");
  validate_design(inst, fixed);
  DfdCache local(inst);
  DfdCache& dfd = cache ? *cache : local;
  const std::size_t cap = options.max_iterations.value_or(inst.latent_trips().size() / options.rho + 10);

  std::vector<char> in_c(inst.trips().size(), 0);
  std::vector<TripIndex> c;
  TripSet t_bar = inst.core_trips();
  HeuristicResult res;

  for (std::size_t k = 0;; ++k) {
    if (k >= cap) throw HeuristicError("rho-GRAD iteration cap reached");
    const auto t0 = Clock::now();
    const Design& z = dfd.solve(t_bar, fixed).design;
    DesignEvaluation ev = eval_design(inst, z, t_bar);
    const auto adopters = ranked_adopters(inst, ev, in_c);
    const std::size_t take = std::min(options.rho, adopters.size());

    TraceRecord rec = make_record(inst, "grad", 0, k, t_bar, z, ev);
    rec.admitted = take;
    rec.admitted_trips.assign(adopters.begin(), adopters.begin() + static_cast<std::ptrdiff_t>(take));
    rec.wall_ms = ms_since(t0);
    res.trace.push_back(rec);

    if (adopters.empty()) {
      res.design = z;
      res.t_hat = t_bar;
      res.evaluation = std::move(ev);
      break;
    }
    for (std::size_t i = 0; i < take; ++i) {
      in_c[adopters[i]] = 1;
      c.push_back(adopters[i]);
    }
    t_bar = with_core(inst, c);
  }
  res.dfd_solves = dfd.size();
  return res;
}

HeuristicResult eta_grre(const Instance& inst, const GrreOptions& options, const Design& fixed,
                         const std::optional<TripSet>& start, DfdCache* cache) {
  if (options.eta < 1) throw std::invalid_argument("eta must be at least 1");
  validate_design(inst, fixed);
  DfdCache local(inst);
  DfdCache& dfd = cache ? *cache : local;

  std::vector<char> rejected(inst.trips().size(), 0);
  std::size_t m = 0;
  TripSet t_bar = start ? *start : inst.core_trips();
  std::optional<Design> prev;
  std::vector<Design> history;
  HeuristicResult res;
  bool have_best = false;

  for (std::size_t k = 0;; ++k) {
    if (k >= options.max_iterations) {
      res.truncated = true;
      break;
    }
    const auto t0 = Clock::now();
    const Design z = dfd.solve(t_bar, fixed).design;
    DesignEvaluation ev = eval_design(inst, z, t_bar);
    if (!have_best || ev.objective < res.evaluation.objective) {
      have_best = true;
      res.design = z;
      res.t_hat = t_bar;
      res.evaluation = ev;
    }

    for (TripIndex r = 0; r < inst.trips().size(); ++r) {
      if (inst.trip(r).is_latent() && !ev.adopts[r]) rejected[r] = 1;
    }
    const auto adopters = ranked_adopters(inst, ev, rejected);
    m += options.eta;
    const std::vector<TripIndex> chosen(adopters.begin(),
                                        adopters.begin() + static_cast<std::ptrdiff_t>(std::min(m, adopters.size())));

    TraceRecord rec = make_record(inst, "grre", 0, k, t_bar, z, ev);
    rec.admitted = chosen.size();
    rec.wall_ms = ms_since(t0);
    res.trace.push_back(rec);

    if (k >= 2 && prev && z == *prev && m - options.eta >= adopters.size()) break;
    if (options.stop_on_repeat && k >= 2 && prev && !(z == *prev) &&
        std::find(history.begin(), history.end(), z) != history.end()) {
      break;
    }
    history.push_back(z);
    prev = z;
    t_bar = with_core(inst, chosen);
  }
  res.dfd_solves = dfd.size();
  return res;
}

HeuristicResult rho_gagr(const Instance& inst, const GagrOptions& options, const Design& fixed, DfdCache* cache) {
  if (options.rho < 1) throw std::invalid_argument("rho must be at least 1");
  if (!(options.time_limit_s > 0.0)) throw std::invalid_argument("time limit must be positive");
  validate_design(inst, fixed);
  DfdCache local(inst);
  DfdCache& dfd = cache ? *cache : local;
  const std::size_t cap = options.max_iterations.value_or(inst.latent_trips().size() / options.rho + 10);
  const auto started = Clock::now();

  std::vector<char> in_c(inst.trips().size(), 0);
  std::vector<TripIndex> c;
  TripSet t_bar = inst.core_trips();
  HeuristicResult res;
  bool have_best = false;

  for (std::size_t k = 0;; ++k) {
    if (k >= cap) throw HeuristicError("rho-GAGR iteration cap reached");
    if (k > 0 && ms_since(started) > options.time_limit_s * 1000.0) {
      res.truncated = true;
      break;
    }
    const auto t0 = Clock::now();
    HeuristicResult inner = eta_grre(inst, options.inner, fixed, t_bar, &dfd);
    for (TraceRecord rec : inner.trace) {
      rec.outer = k;
      res.trace.push_back(std::move(rec));
    }
    res.truncated = res.truncated || inner.truncated;
    if (!have_best || inner.evaluation.objective < res.evaluation.objective) {
      have_best = true;
      res.design = inner.design;
      res.t_hat = inner.t_hat;
      res.evaluation = inner.evaluation;
    }

    const DesignEvaluation ev = eval_design(inst, inner.design, t_bar);
    const auto adopters = ranked_adopters(inst, ev, in_c);
    const std::size_t take = std::min(options.rho, adopters.size());
    TraceRecord rec = make_record(inst, "gagr", k, k, t_bar, inner.design, ev);
    rec.admitted = take;
    rec.admitted_trips.assign(adopters.begin(), adopters.begin() + static_cast<std::ptrdiff_t>(take));
    rec.wall_ms = ms_since(t0);
    res.trace.push_back(rec);

    if (adopters.empty()) break;
    for (std::size_t i = 0; i < take; ++i) {
      in_c[adopters[i]] = 1;
      c.push_back(adopters[i]);
    }
    t_bar = with_core(inst, c);
  }
  res.dfd_solves = dfd.size();
  return res;
}

}  // namespace odmts
