#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "odmts/instance.hpp"
#include "odmts/synthetic.hpp"
#include "random_instances.hpp"

using namespace odmts;

namespace {

InstanceData two_hub_data(double theta, double rate, double buses, double d_hl, double t_hl, double wait) {
  InstanceData d;
  d.stops = {0, 1, 2};
  d.hubs = {1, 2};
  d.time = Matrix(3, 3);
  d.dist = Matrix(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      d.time(i, j) = 5;
      d.dist(i, j) = 3;
    }
  }
  d.time(1, 2) = d.time(2, 1) = t_hl;
  d.dist(1, 2) = d.dist(2, 1) = d_hl;
  d.params.theta = theta;
  d.params.bus_rate = rate;
  d.params.buses_per_leg = buses;
  d.params.wait_default = wait;
  d.trips.push_back({0, 0, 2, 1, TripKind::core, 0.0, 0.0});
  return d;
}

std::string message_of(InstanceData d) {
  try {
    Instance inst(std::move(d));
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Weights, BetaAtPaperRates) {
  const Instance inst(two_hub_data(0.001, 3.87, 16, 2.0, 10.0, 7.5));
  const auto a = *inst.arc_index(0, 1);
  EXPECT_NEAR(inst.weights().beta[a], 123.71616, 1e-9 * 123.71616);
}

TEST(Weights, TauAtPaperWait) {
  const Instance inst(two_hub_data(0.001, 3.87, 16, 2.0, 10.0, 7.5));
  EXPECT_NEAR(inst.weights().tau(0, 1), 0.0175, 1e-15);
}

TEST(Weights, GammaAtHalfWeight) {
  const Instance inst(two_hub_data(0.5, 1.0, 1.0, 2.0, 10.0, 7.5));
  // d = 3, t = 5 between ordinary stops
  EXPECT_DOUBLE_EQ(inst.weights().gamma(0, 1), 4.0);
  EXPECT_DOUBLE_EQ(inst.weights().varphi, 0.5 * 2.5);
}

TEST(Weights, PerTimeMode) {
  InstanceData d = two_hub_data(0.25, 60.0, 2.0, 2.0, 10.0, 0.0);
  d.params.bus_cost_mode = BusCostMode::per_time;
  const Instance inst(std::move(d));
  EXPECT_DOUBLE_EQ(inst.weights().beta[0], 0.75 * 60.0 * 2.0 * 10.0 / 60.0);
}

TEST(Weights, HomogeneousInBusRate) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const Instance base(testkit::random_metric_instance(rng).data());
    InstanceData doubled = base.data();
    doubled.params.bus_rate *= 2.0;
    const Instance twice(std::move(doubled));
    for (ArcIndex a = 0; a < base.arc_count(); ++a) {
      EXPECT_EQ(twice.weights().beta[a], 2.0 * base.weights().beta[a]);
    }
  }
}

TEST(Weights, ThetaLimits) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    InstanceData d = testkit::random_metric_instance(rng).data();
    d.params.theta = 1.0;
    const Instance one(d);
    for (double b : one.weights().beta) EXPECT_EQ(b, 0.0);
    for (StopIndex i = 0; i < one.stop_count(); ++i) {
      for (StopIndex j = 0; j < one.stop_count(); ++j) EXPECT_EQ(one.weights().gamma(i, j), one.time(i, j));
    }
    d.params.theta = 0.0;
    const Instance zero(d);
    for (double t : zero.weights().tau.data()) EXPECT_EQ(t, 0.0);
  }
}

TEST(Weights, FixedArcCostFlag) {
  InstanceData d = two_hub_data(0.5, 1.0, 1.0, 2.0, 10.0, 5.0);
  d.params.fixed_arcs = {{1, 2}, {2, 1}};
  d.params.fixed_arc_costed = false;
  const Instance inst(d);
  EXPECT_EQ(inst.weights().beta[0], 0.0);
  EXPECT_EQ(inst.fixed_arcs().size(), 2u);
  d.params.fixed_arc_costed = true;
  EXPECT_GT(Instance(d).weights().beta[0], 0.0);
}

TEST(Validation, NamesFirstViolation) {
  InstanceData d = two_hub_data(1.2, 1, 1, 2, 10, 5);
  EXPECT_EQ(message_of(d), "theta out of range");

  d = two_hub_data(0.5, 1, 1, 2, 10, 5);
  d.time(0, 0) = 1.0;
  EXPECT_EQ(message_of(d), "time diagonal must be zero");

  d = two_hub_data(0.5, 1, 1, 2, 10, 5);
  d.dist(0, 1) = -1.0;
  EXPECT_EQ(message_of(d), "dist entries must be finite and non-negative");

  d = two_hub_data(0.5, 1, 1, 2, 10, 5);
  d.trips[0].destination = 0;
  EXPECT_EQ(message_of(d), "trip 0: origin equals destination");

  d = two_hub_data(0.5, 1, 1, 2, 10, 5);
  d.trips[0].kind = TripKind::latent;
  d.trips[0].alpha = 0.5;
  d.trips[0].t_cur = 3.0;
  EXPECT_EQ(message_of(d), "trip 0: latent alpha must be >= 1");

  d = two_hub_data(0.5, 1, 1, 2, 10, 5);
  d.params.fixed_arcs = {{1, 2}};
  EXPECT_EQ(message_of(d), "fixed arcs violate weak connectivity");

  d = two_hub_data(0.5, 1, 1, 2, 10, 5);
  d.params.fixed_arcs = {{0, 2}, {2, 0}};
  EXPECT_EQ(message_of(d), "fixed arc endpoint is not a hub");
}

TEST(Schema, RoundTrip) {
  const Instance inst(two_hub_data(0.5, 1, 1, 2, 10, 5));
  const std::string text = serialize_instance(inst);
  const Instance back = parse_instance(text);
  EXPECT_EQ(back.stop_count(), 3u);
  EXPECT_EQ(back.hub_count(), 2u);
  EXPECT_EQ(serialize_instance(back), text);
}

TEST(Schema, UnknownStopAndBadTheta) {
  const std::string good = serialize_instance(Instance(two_hub_data(0.5, 1, 1, 2, 10, 5)));
  std::string bad = good;
  bad.replace(bad.find("\"destination\": 2"), 16, "\"destination\": 99");
  try {
    parse_instance(bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown stop"), std::string::npos);
  }
  std::string theta = good;
  theta.replace(theta.find("\"theta\": 0.5"), 12, "\"theta\": 1.2");
  try {
    parse_instance(theta);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "theta out of range");
  }
  EXPECT_THROW(parse_instance("{not json"), ParseError);
  EXPECT_THROW(parse_instance("{\"stops\": []}"), ParseError);
}

TEST(Schema, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "odmts_instance_roundtrip.json";
  const Instance inst(testkit::routing_example_data());
  save_instance(inst, path);
  EXPECT_EQ(serialize_instance(load_instance(path)), serialize_instance(inst));
  std::filesystem::remove(path);
  EXPECT_THROW(load_instance(path), ParseError);
}

TEST(Candidates, NearestK) {
  GeneratorConfig cfg;
  cfg.stops = 30;
  cfg.hubs = 6;
  cfg.core = 5;
  cfg.latent = 5;
  cfg.params.nearest_k = 2;
  const Instance inst = generate_synthetic(cfg, 3);
  EXPECT_EQ(inst.arc_count(), 12u);
  for (HubIndex h = 0; h < inst.hub_count(); ++h) {
    // the kept arcs are the two quickest from h
    std::vector<double> all, kept;
    for (HubIndex l = 0; l < inst.hub_count(); ++l) {
      if (l == h) continue;
      all.push_back(inst.time(inst.hub_stop(h), inst.hub_stop(l)));
      if (inst.arc_index(h, l)) kept.push_back(all.back());
    }
    std::sort(all.begin(), all.end());
    std::sort(kept.begin(), kept.end());
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[1], all[1]);
  }
}

TEST(Generator, Deterministic) {
  GeneratorConfig cfg;
  EXPECT_EQ(serialize_instance(generate_synthetic(cfg, 7)), serialize_instance(generate_synthetic(cfg, 7)));
  EXPECT_NE(serialize_instance(generate_synthetic(cfg, 7)), serialize_instance(generate_synthetic(cfg, 8)));
}

TEST(Generator, CountsAndClasses) {
  GeneratorConfig cfg;
  const Instance inst = generate_synthetic(cfg, 7);
  EXPECT_EQ(inst.trips().size(), 200u);
  EXPECT_EQ(inst.latent_trips().size(), 140u);
  EXPECT_EQ(inst.stop_count(), 100u);
  EXPECT_EQ(inst.hub_count(), 8u);
  for (TripIndex r : inst.latent_trips()) {
    const double a = inst.trip(r).alpha;
    EXPECT_TRUE(a == 2.0 || a == 1.5);
    EXPECT_DOUBLE_EQ(inst.trip(r).t_cur, inst.time(inst.trip(r).origin, inst.trip(r).destination));
  }
  const CostParams& p = inst.params();
  EXPECT_EQ(p.theta, 0.001);
  EXPECT_EQ(p.bus_rate, 3.87);
  EXPECT_EQ(p.wait_default, 7.5);
  EXPECT_EQ(p.ticket, 2.5);
  EXPECT_EQ(p.omega, 1.0);
}

TEST(Generator, TriangleInequality) {
  GeneratorConfig cfg;
  cfg.stops = 40;
  const Instance inst = generate_synthetic(cfg, 5);
  for (StopIndex i = 0; i < inst.stop_count(); ++i) {
    for (StopIndex j = 0; j < inst.stop_count(); ++j) {
      for (StopIndex k = 0; k < inst.stop_count(); ++k) {
        EXPECT_LE(inst.dist(i, j), inst.dist(i, k) + inst.dist(k, j) + 1e-12);
        EXPECT_LE(inst.time(i, j), inst.time(i, k) + inst.time(k, j) + 1e-12);
      }
    }
  }
}

TEST(Generator, RejectsMoreHubsThanStops) {
  GeneratorConfig cfg;
  cfg.stops = 5;
  cfg.hubs = 6;
  EXPECT_THROW(generate_synthetic(cfg, 1), GeneratorError);
}
