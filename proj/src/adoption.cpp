#include "odmts/adoption.hpp"

#include <algorithm>
#include <stdexcept>

#include "odmts/parallel.hpp"

namespace odmts {

bool choice(const Route& route, const Trip& trip) {
  if (!trip.is_latent()) throw std::invalid_argument("choice is only defined for latent trips");
  return route.f <= trip.alpha * trip.t_cur;
}

double net_cost(const Route& route, const Instance& inst) { return route.money - inst.params().ticket; }

void set_false_rates(const Instance& inst, DesignEvaluation& ev, const TripSet& t_hat) {
  const auto& trips = inst.trips();
  std::vector<char> in_hat(trips.size(), 0);
  for (TripIndex r : t_hat) {
    if (r >= trips.size()) throw ValidationError("trip set is not a subset of the instance trips");
    in_hat[r] = 1;
  }
  std::size_t latent = 0, false_reject = 0, false_adopt = 0;
  for (TripIndex r = 0; r < trips.size(); ++r) {
    if (!trips[r].is_latent()) continue;
    ++latent;
    if (ev.adopts[r] && !in_hat[r]) ++false_reject;
    if (!ev.adopts[r] && in_hat[r]) ++false_adopt;
  }
  ev.r_false = latent ? 100.0 * static_cast<double>(false_reject) / static_cast<double>(latent) : 0.0;
  ev.a_false = latent ? 100.0 * static_cast<double>(false_adopt) / static_cast<double>(latent) : 0.0;
}

namespace {

DesignEvaluation score(const Instance& inst, const Design& z, const TripSet& t_hat, std::vector<Route> routes) {
  const auto& trips = inst.trips();
  const WeightTable& w = inst.weights();

  DesignEvaluation ev;
  ev.routes = std::move(routes);
  ev.adopts.assign(trips.size(), 1);

  double obj = 0.0;
  Kpis& k = ev.kpis;
  for (ArcIndex a : z.open_arcs()) {
    obj += w.beta[a];
    k.bus_cost_dollars += w.beta_dollars[a];
  }
  k.bus_investment = obj;
  k.agency_net_cost = k.bus_cost_dollars;

  for (TripIndex r = 0; r < trips.size(); ++r) {
    const Trip& t = trips[r];
    const Route& route = ev.routes[r];
    const double p = t.riders;
    bool served = true;
    if (t.is_latent()) {
      served = choice(route, t);
      ev.adopts[r] = served ? 1 : 0;
      if (served) {
        obj += p * (route.g - w.varphi);
        ev.adopters.push_back(t.id);
      }
    } else {
      obj += p * route.g;
    }
    if (served) {
      k.shuttle_km += p * route.shuttle_km;
      k.convenience_minutes += p * route.f;
      k.agency_net_cost += p * net_cost(route, inst);
    }
  }
  ev.objective = obj;
  std::sort(ev.adopters.begin(), ev.adopters.end());
  set_false_rates(inst, ev, t_hat);
  return ev;
}

}  // namespace

DesignEvaluation eval_design(const Instance& inst, const Design& z, const TripSet& t_hat) {
  validate_design(inst, z);
  return score(inst, z, t_hat, route_batch(inst, std::span<const Trip>(inst.trips()), z));
}

DesignEvaluation eval_design_serial(const Instance& inst, const Design& z, const TripSet& t_hat) {
  validate_design(inst, z);
  return score(inst, z, t_hat, route_batch_serial(inst, std::span<const Trip>(inst.trips()), z));
}

double eval_objective(const Instance& inst, const Design& z) { return eval_design(inst, z, {}).objective; }

TripSet adopter_set(const Instance& inst, const DesignEvaluation& ev) {
  TripSet out;
  for (TripIndex r = 0; r < inst.trips().size(); ++r) {
    if (ev.adopts[r]) out.push_back(r);
  }
  return out;
}

ExactResult exact_tiny(const Instance& inst, const Design& fixed, bool resolve_dfd) {
  validate_design(inst, fixed);
  const std::vector<Design> designs = enumerate_designs(inst, fixed);
  std::vector<double> values(designs.size());
  const auto n = static_cast<std::ptrdiff_t>(designs.size());
  detail::ErrorSlot errors(designs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      values[i] = score(inst, designs[i], {}, route_batch_serial(inst, std::span<const Trip>(inst.trips()), designs[i]))
                      .objective;
    } catch (...) {
      errors.capture(static_cast<std::size_t>(i));
    }
  }
  errors.rethrow_first();

  const double best = *std::min_element(values.begin(), values.end());
  std::size_t pick = 0;
  while (!leq_tol(values[pick], best, 1e-9)) ++pick;

  ExactResult res;
  res.designs = designs.size();
  res.design = designs[pick];
  const DesignEvaluation first = eval_design(inst, res.design, {});
  res.t_star = adopter_set(inst, first);
  res.evaluation = eval_design(inst, res.design, res.t_star);
  if (resolve_dfd) {
    DfdSolution sol = solve_dfd(inst, res.t_star, fixed);
    res.dfd_evaluation = eval_design(inst, sol.design, res.t_star);
    res.dfd_reproduces = sol.design == res.design;
    res.dfd_design = std::move(sol.design);
  }
  return res;
}

}  // namespace odmts
