#include <gtest/gtest.h>

#include <random>

#include "odmts/adoption.hpp"
#include "odmts/cycles.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace odmts;

namespace {

Trip latent_trip(double alpha, double t_cur, int id = 0) {
  Trip t;
  t.id = id;
  t.origin = 0;
  t.destination = 3;
  t.kind = TripKind::latent;
  t.alpha = alpha;
  t.t_cur = t_cur;
  return t;
}

Route with_f(double f) {
  Route r;
  r.f = f;
  return r;
}

Design both_ways(const Instance& inst) {
  Design z(inst.arc_count());
  z.set(*inst.arc_index(0, 1), true);
  z.set(*inst.arc_index(1, 0), true);
  return z;
}

Instance extended_example() {
  InstanceData d = testkit::routing_example_data(0.5);
  d.trips[0].riders = 2;
  d.trips[0].id = 1;
  Trip t = latent_trip(1.0, 25.0, 2);
  d.trips.push_back(t);
  return Instance(std::move(d));
}

}  // namespace

TEST(Choice, Examples) {
  EXPECT_TRUE(choice(with_f(30), latent_trip(2.0, 20)));
  EXPECT_FALSE(choice(with_f(30), latent_trip(1.5, 19)));
  EXPECT_TRUE(choice(with_f(30), latent_trip(1.5, 20)));
  Trip core;
  EXPECT_THROW(choice(with_f(1), core), std::invalid_argument);
}

TEST(NetCost, Examples) {
  const Instance inst(testkit::routing_example_data());
  Route r;
  r.money = 3.5;
  EXPECT_DOUBLE_EQ(net_cost(r, inst), 1.0);
  r.money = 2.5;
  EXPECT_DOUBLE_EQ(net_cost(r, inst), 0.0);
  EXPECT_DOUBLE_EQ(net_cost(route(inst, inst.trip(0), Design(inst.arc_count())), inst), 9.5);
}

TEST(Eval, FalseRates) {
  InstanceData d = testkit::routing_example_data();
  d.trips.clear();
  // empty design: every trip takes the direct shuttle with f = 25
  d.trips.push_back(latent_trip(1.0, 25.0, 0));  // a adopts
  d.trips.push_back(latent_trip(1.0, 20.0, 1));  // b rejects
  d.trips.push_back(latent_trip(1.0, 30.0, 2));  // c adopts
  d.trips.push_back(latent_trip(1.0, 10.0, 3));  // d rejects
  const Instance inst(std::move(d));
  const DesignEvaluation ev = eval_design(inst, Design(inst.arc_count()), {0, 1});
  EXPECT_DOUBLE_EQ(ev.a_false, 25.0);
  EXPECT_DOUBLE_EQ(ev.r_false, 25.0);
  EXPECT_EQ(ev.adopters, (std::vector<int>{0, 2}));
  EXPECT_THROW(eval_design(inst, Design(inst.arc_count()), {7}), ValidationError);
}

TEST(Eval, NoAdoptersNoArcs) {
  InstanceData d = testkit::routing_example_data();
  d.trips.push_back(latent_trip(1.0, 5.0, 1));
  const Instance inst(std::move(d));
  const DesignEvaluation ev = eval_design(inst, Design(inst.arc_count()), inst.core_trips());
  EXPECT_DOUBLE_EQ(ev.objective, 18.5);
  EXPECT_TRUE(ev.adopters.empty());
}

TEST(Eval, ExtendedExample) {
  const Instance inst = extended_example();
  const DesignEvaluation ev = eval_design(inst, both_ways(inst), inst.all_trips());
  EXPECT_DOUBLE_EQ(ev.objective, 44.0);
  EXPECT_EQ(ev.adopters, (std::vector<int>{2}));
  EXPECT_DOUBLE_EQ(oracle::brute_eval(inst, both_ways(inst)), 44.0);
  EXPECT_DOUBLE_EQ(ev.kpis.bus_investment, 4.0);
  EXPECT_DOUBLE_EQ(ev.kpis.shuttle_km, 3 * 3.5);
  EXPECT_DOUBLE_EQ(ev.kpis.convenience_minutes, 3 * 24.0);
  EXPECT_DOUBLE_EQ(ev.kpis.agency_net_cost, 8.0 + 3 * 1.0);
}

TEST(EvalProperty, MatchesOracleAndChoice) {
  std::mt19937_64 rng(301);
  for (int rep = 0; rep < 40; ++rep) {
    const Instance inst = testkit::random_metric_instance(rng);
    const auto designs = enumerate_designs(inst, Design(inst.arc_count()));
    const Design& z = designs[std::uniform_int_distribution<std::size_t>(0, designs.size() - 1)(rng)];
    const DesignEvaluation ev = eval_design(inst, z, inst.core_trips());
    const DesignEvaluation ser = eval_design_serial(inst, z, inst.core_trips());
    const double o = oracle::brute_eval(inst, z);
    EXPECT_NEAR(ev.objective, o, 1e-9 * std::max(1.0, std::abs(o)));
    EXPECT_EQ(ev.objective, ser.objective);
    EXPECT_EQ(ev.adopters, ser.adopters);
    EXPECT_GE(ev.r_false, 0.0);
    EXPECT_LE(ev.r_false, 100.0);
    EXPECT_EQ(ev.a_false, 0.0);
    for (TripIndex r : inst.latent_trips()) {
      EXPECT_EQ(ev.adopts[r] != 0, choice(route(inst, inst.trip(r), z), inst.trip(r)));
    }
  }
}

TEST(EvalProperty, UnusedCycleCostsItsBeta) {
  std::mt19937_64 rng(302);
  int checked = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const Instance inst = testkit::random_metric_instance(rng);
    const Design base(inst.arc_count());
    const double e0 = eval_objective(inst, base);
    Design all(inst.arc_count());
    for (ArcIndex a = 0; a < inst.arc_count(); ++a) all.set(a, true);
    for (const Cycle& c : find_cycles(inst, all)) {
      const Design z = cycle_design(inst, c);
      const DesignEvaluation ev = eval_design(inst, z, {});
      const bool used = std::any_of(ev.routes.begin(), ev.routes.end(), [](const Route& r) { return r.uses_bus(); });
      if (used) continue;
      EXPECT_NEAR(ev.objective, e0 + investment(inst, z), 1e-9 * std::max(1.0, std::abs(e0)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Exact, NoLatentEqualsDfd) {
  std::mt19937_64 rng(303);
  for (int rep = 0; rep < 10; ++rep) {
    InstanceData d = testkit::random_metric_instance(rng).data();
    for (Trip& t : d.trips) {
      t.kind = TripKind::core;
      t.alpha = t.t_cur = 0.0;
    }
    const Instance inst(std::move(d));
    const ExactResult ex = exact_tiny(inst, Design(inst.arc_count()));
    const DfdSolution e = enumerate_dfd(inst, inst.all_trips(), Design(inst.arc_count()));
    EXPECT_EQ(ex.design, e.design);
    EXPECT_NEAR(ex.evaluation.objective, e.objective, 1e-9 * std::max(1.0, e.objective));
  }
}

TEST(Exact, OptimumAndResolve) {
  std::mt19937_64 rng(304);
  for (int rep = 0; rep < 15; ++rep) {
    const Instance inst = testkit::random_metric_instance(rng);
    const ExactResult ex = exact_tiny(inst, Design(inst.arc_count()));
    for (const Design& z : oracle::brute_designs(inst, Design(inst.arc_count()))) {
      EXPECT_LE(ex.evaluation.objective, oracle::brute_eval(inst, z) + 1e-9 * std::max(1.0, ex.evaluation.objective));
    }
    EXPECT_EQ(ex.evaluation.r_false, 0.0);
    EXPECT_EQ(ex.evaluation.a_false, 0.0);
    ASSERT_TRUE(ex.dfd_design.has_value());
    if (ex.dfd_reproduces) {
      EXPECT_EQ(ex.dfd_evaluation->r_false, 0.0);
      EXPECT_EQ(ex.dfd_evaluation->a_false, 0.0);
    }
  }
}
