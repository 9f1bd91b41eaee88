// odmts: generate instances, run the design algorithms, score and compare designs.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "odmts/instance.hpp"
#include "odmts/parallel.hpp"
#include "odmts/report.hpp"
#include "odmts/runner.hpp"
#include "odmts/synthetic.hpp"

namespace fs = std::filesystem;
using namespace odmts;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kSolver = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Rule> parse_rules(const std::string& text) {
  std::vector<Rule> rules;
  if (text.empty()) return rules;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) rules.push_back(parse_rule(item));
  return rules;
}

// ---- generate

struct GenerateArgs {
  GeneratorConfig config;
  std::uint64_t seed = 1;
  std::string out = "instance.json";
  int nearest = 3;
};

int cmd_generate(const GenerateArgs& a) {
  GeneratorConfig cfg = a.config;
  if (a.nearest > 0) {
    cfg.params.nearest_k = static_cast<std::size_t>(a.nearest);
  } else {
    cfg.params.nearest_k.reset();
  }
  Instance inst = generate_synthetic(cfg, a.seed);
  const std::string text = serialize_instance(inst);
  write_file(a.out, text);
  std::cout << "wrote " << a.out << "\n"
            << "stops " << inst.stop_count() << " hubs " << inst.hub_count() << " arcs " << inst.arc_count()
            << " trips " << inst.trips().size() << " latent " << inst.latent_trips().size() << "\n"
            << "sha256 " << sha256_hex(text) << "\n";
  return kOk;
}

// ---- solve

struct SolveArgs {
  std::string instance;
  std::string alg = "grad";
  std::optional<std::size_t> rho, eta;
  std::string rules;
  double time_limit = 300.0;
  std::string out = "out";
  bool stop_on_repeat = false;
};

RunConfig make_config(const std::string& alg, const SolveArgs& a) {
  RunConfig c;
  c.algorithm = parse_algorithm(alg);
  c.rho = a.rho;
  c.eta = a.eta;
  c.rules = parse_rules(a.rules);
  c.time_limit_s = a.time_limit;
  c.grre_stop_on_repeat = a.stop_on_repeat;
  if (c.rho && *c.rho < 1) throw UsageError("--rho must be at least 1");
  if (c.eta && *c.eta < 1) throw UsageError("--eta must be at least 1");
  if (!(c.time_limit_s > 0)) throw UsageError("--time-limit must be positive");
  if (c.algorithm == Algorithm::arc_s2 && !c.rules.empty() && c.rules.size() != 2) {
    throw UsageError("arc-s2 needs --rules X,Y");
  }
  if (c.algorithm == Algorithm::arc_s1 && c.rules.size() > 1) throw UsageError("arc-s1 takes a single rule");
  if (c.algorithm == Algorithm::arc_s2 && !c.rules.empty() && c.rules[0] == Rule::a) {
    throw UsageError("the first arc-s2 rule must not be a");
  }
  return c;
}

void write_bundle(const Instance& inst, const RunOutput& out, const std::string& alg, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "design.json", design_json(inst, out.design));
  write_file(dir / "evaluation.json", evaluation_json(inst, out.evaluation, out.t_hat));
  write_file(dir / "trace.csv", trace_csv(out.trace, alg));
  write_file(dir / "timing.csv", timing_csv(out.trace));
  if (!out.rounds.empty()) write_file(dir / "rounds.csv", rounds_csv(out.rounds));
}

int cmd_solve(const SolveArgs& a) {
  const Instance inst = load_instance(a.instance);
  const RunConfig config = make_config(a.alg, a);
  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  RunOutput out;
  try {
    out = run_algorithm(inst, config);
  } catch (const PartialRunError& e) {
    std::cerr << "solver failure: " << e.what() << " (best incumbent written)\n";
    out = e.partial;
    code = kSolver;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_bundle(inst, out, a.alg, a.out);
  std::cout << "algorithm " << a.alg << "\n"
            << "objective " << format_number(out.evaluation.objective) << "\n"
            << "r_false " << format_number(out.evaluation.r_false) << "\n"
            << "a_false " << format_number(out.evaluation.a_false) << "\n"
            << "open_arcs " << out.design.open_count() << "\n"
            << "wall_s " << secs << "\n";
  if (out.truncated) std::cout << "truncated 1\n";
  return code;
}

// ---- evaluate

struct EvaluateArgs {
  std::string instance;
  std::string design;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const Instance inst = load_instance(a.instance);
  const std::string text = read_file(a.design);
  const Design z = parse_design(inst, text);
  validate_design(inst, z);
  // the trip set recorded next to the design, if any
  TripSet t_hat;
  const fs::path ev_path = fs::path(a.design).parent_path() / "evaluation.json";
  if (fs::exists(ev_path)) t_hat = parse_t_hat(inst, read_file(ev_path));
  const DesignEvaluation ev = eval_design(inst, z, t_hat);
  const std::string report = evaluation_json(inst, ev, t_hat);
  if (a.out.empty()) {
    std::cout << report;
  } else {
    write_file(a.out, report);
  }
  return kOk;
}

// ---- compare

struct CompareArgs {
  std::vector<std::string> instances;
  std::vector<std::string> algs;
  SolveArgs solve;
  std::string out = "compare.csv";
};

int cmd_compare(const CompareArgs& a) {
  if (a.algs.empty()) throw UsageError("no algorithms given");
  if (a.instances.empty()) throw UsageError("no instances given");
  struct Row {
    std::string instance, alg, status;
    RunOutput out;
    double secs = 0.0;
  };
  std::vector<Row> rows;
  for (const auto& path : a.instances) {
    const Instance inst = load_instance(path);
    for (const auto& alg : a.algs) {
      Row row{fs::path(path).filename().string(), alg, "ok", {}, 0.0};
      const RunConfig config = make_config(alg, a.solve);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        row.out = run_algorithm(inst, config);
        if (row.out.truncated) row.status = "truncated";
      } catch (const PartialRunError& e) {
        row.out = e.partial;
        row.status = "partial";
      } catch (const std::exception& e) {
        row.status = "error";
        std::cerr << row.instance << " " << alg << ": " << e.what() << "\n";
      }
      row.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows.push_back(std::move(row));
    }
  }

  std::map<std::string, double> best;
  for (const Row& r : rows) {
    if (r.status == "error") continue;
    auto it = best.find(r.instance);
    if (it == best.end() || r.out.evaluation.objective < it->second) best[r.instance] = r.out.evaluation.objective;
  }

  std::ostringstream csv, timing;
  csv << "# tool_version=" << kToolVersion << "\n";
  csv << "instance,algorithm,status,objective,best_known,gap_pct,r_false,a_false,open_arcs,shuttle_km,"
         "bus_investment,bus_cost_dollars,convenience_minutes,agency_net_cost\n";
  timing << "instance,algorithm,wall_s\n";
  for (const Row& r : rows) {
    timing << r.instance << ',' << r.alg << ',' << r.secs << "\n";
    csv << r.instance << ',' << r.alg << ',' << r.status;
    if (r.status == "error") {
      csv << ",,,,,,,,,,,\n";
      continue;
    }
    const auto& ev = r.out.evaluation;
    const double b = best.at(r.instance);
    const double gap = 100.0 * (ev.objective - b) / std::max(1.0, std::abs(b));
    csv << ',' << format_number(ev.objective) << ',' << format_number(b) << ',' << format_number(gap) << ','
        << format_number(ev.r_false) << ',' << format_number(ev.a_false) << ',' << r.out.design.open_count() << ','
        << format_number(ev.kpis.shuttle_km) << ',' << format_number(ev.kpis.bus_investment) << ','
        << format_number(ev.kpis.bus_cost_dollars) << ',' << format_number(ev.kpis.convenience_minutes) << ','
        << format_number(ev.kpis.agency_net_cost) << "\n";
  }
  write_file(a.out, csv.str());
  fs::path tpath = a.out;
  tpath.replace_extension(".timing.csv");
  write_file(tpath, timing.str());
  std::cout << csv.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"On-demand multimodal transit design with latent demand"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.set_version_flag("--version", kToolVersion);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a synthetic instance");
  g->add_option("--stops", gen.config.stops);
  g->add_option("--hubs", gen.config.hubs);
  g->add_option("--core", gen.config.core);
  g->add_option("--latent", gen.config.latent);
  g->add_option("--area-km", gen.config.area_km);
  g->add_option("--max-riders", gen.config.max_riders);
  g->add_option("--buses-per-leg", gen.config.params.buses_per_leg);
  g->add_option("--nearest", gen.nearest, "candidate arcs per hub by travel time (0 = all pairs)");
  g->add_option("--seed", gen.seed);
  g->add_option("-o,--out", gen.out);

  SolveArgs sol;
  auto add_solver_flags = [](CLI::App* c, SolveArgs& s) {
    c->add_option("--rho", s.rho);
    c->add_option("--eta", s.eta);
    c->add_option("--rules", s.rules, "expansion rules, e.g. a or d,a");
    c->add_option("--time-limit", s.time_limit, "seconds, rho-GAGR");
    c->add_flag("--stop-on-repeat", s.stop_on_repeat, "eta-GRRE ends on any repeated design");
  };
  auto* s = app.add_subcommand("solve", "run one algorithm");
  s->add_option("instance", sol.instance)->required();
  s->add_option("--alg", sol.alg, "dfd|exact|grad|grre|gagr|arc-s1|arc-s2");
  s->add_option("-o,--out", sol.out, "output directory");
  add_solver_flags(s, sol);

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "score a design file");
  e->add_option("instance", ev.instance)->required();
  e->add_option("design", ev.design)->required();
  e->add_option("-o,--out", ev.out);

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "run algorithms over instances");
  c->add_option("--instances", cmp.instances)->required();
  c->add_option("--algs", cmp.algs)->delimiter(',');
  c->add_option("-o,--out", cmp.out);
  add_solver_flags(c, cmp.solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  set_thread_count(threads);
  try {
    if (*g) return cmd_generate(gen);
    if (*s) return cmd_solve(sol);
    if (*e) return cmd_evaluate(ev);
    if (*c) return cmd_compare(cmp);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const GeneratorError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "solver failure: " << err.what() << "\n";
    return kSolver;
  }
  return kUsage;
}
