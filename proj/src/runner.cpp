#include "odmts/runner.hpp"

namespace odmts {

namespace {
const std::vector<std::pair<Algorithm, const char*>>& names() {
  static const std::vector<std::pair<Algorithm, const char*>> table = {
      {Algorithm::dfd, "dfd"},   {Algorithm::exact, "exact"},   {Algorithm::grad, "grad"},
      {Algorithm::grre, "grre"}, {Algorithm::gagr, "gagr"},     {Algorithm::arc_s1, "arc-s1"},
      {Algorithm::arc_s2, "arc-s2"}};
  return table;
}

RunOutput from_heuristic(HeuristicResult h) {
  RunOutput out;
  out.design = std::move(h.design);
  out.t_hat = std::move(h.t_hat);
  out.evaluation = std::move(h.evaluation);
  out.trace = std::move(h.trace);
  out.truncated = h.truncated;
  return out;
}

TraceRecord single_record(const Instance& inst, const char* stage, const Design& z, const TripSet& t_hat,
                          const DesignEvaluation& ev) {
  TraceRecord rec;
  rec.stage = stage;
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
}  // namespace

Algorithm parse_algorithm(const std::string& id) {
  for (const auto& [a, name] : names()) {
    if (id == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + id + "'");
}

std::string algorithm_id(Algorithm a) {
  for (const auto& [alg, name] : names()) {
    if (alg == a) return name;
  }
  return "?";
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> list = {Algorithm::dfd,  Algorithm::exact,  Algorithm::grad, Algorithm::grre,
                                              Algorithm::gagr, Algorithm::arc_s1, Algorithm::arc_s2};
  return list;
}

RunOutput run_algorithm(const Instance& inst, const RunConfig& config) {
  const Design fixed = Design::with_fixed_arcs(inst);
  const std::size_t rho = config.rho.value_or(default_step(inst));
  const std::size_t eta = config.eta.value_or(default_step(inst));

  switch (config.algorithm) {
    case Algorithm::dfd: {
      const TripSet all = inst.all_trips();
      RunOutput out;
      try {
        DfdSolution sol = solve_dfd(inst, all, fixed);
        out.design = std::move(sol.design);
        out.rounds = std::move(sol.rounds);
      } catch (const DfdError& e) {
        out.design = e.best;
        out.t_hat = all;
        out.evaluation = eval_design(inst, out.design, all);
        throw PartialRunError(e.what(), std::move(out));
      }
      out.t_hat = all;
      out.evaluation = eval_design(inst, out.design, all);
      out.trace.push_back(single_record(inst, "dfd", out.design, all, out.evaluation));
      return out;
    }
    case Algorithm::exact: {
      ExactResult ex = exact_tiny(inst, fixed, false);
      RunOutput out;
      out.design = std::move(ex.design);
      out.t_hat = std::move(ex.t_star);
      out.evaluation = std::move(ex.evaluation);
      out.trace.push_back(single_record(inst, "exact", out.design, out.t_hat, out.evaluation));
      return out;
    }
    case Algorithm::grad:
      return from_heuristic(rho_grad(inst, {rho, std::nullopt}, fixed));
    case Algorithm::grre: {
      GrreOptions o;
      o.eta = eta;
      o.stop_on_repeat = config.grre_stop_on_repeat;
      return from_heuristic(eta_grre(inst, o, fixed));
    }
    case Algorithm::gagr: {
      GagrOptions o;
      o.rho = rho;
      o.inner.eta = eta;
      o.inner.stop_on_repeat = config.grre_stop_on_repeat;
      o.time_limit_s = config.time_limit_s;
      return from_heuristic(rho_gagr(inst, o, fixed));
    }
    case Algorithm::arc_s1: {
      const Rule rule = config.rules.empty() ? Rule::a : config.rules.front();
      if (config.rules.size() > 1) throw std::invalid_argument("arc-s1 takes one rule");
      return from_heuristic(arc_s1(inst, rule, fixed));
    }
    case Algorithm::arc_s2: {
      std::vector<Rule> rules = config.rules.empty() ? std::vector<Rule>{Rule::d, Rule::a} : config.rules;
      if (rules.size() != 2) throw std::invalid_argument("arc-s2 takes two rules");
      return from_heuristic(arc_s2(inst, rules[0], rules[1], fixed));
    }
  }
  throw std::logic_error("unhandled algorithm");
}

}  // namespace odmts
