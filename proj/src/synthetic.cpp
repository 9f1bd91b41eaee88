#include "odmts/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace odmts {

CostParams GeneratorConfig::default_params() {
  CostParams p;
  p.theta = 0.001;
  p.omega = 1.0;
  p.bus_cost_mode = BusCostMode::per_distance;
  p.bus_rate = 3.87;
  // a desk-scale horizon: a few buses per leg instead of a full peak period
  p.buses_per_leg = 1.0;
  p.wait_default = 7.5;
  p.ticket = 2.5;
  p.nearest_k = 3;
  return p;
}

namespace {

// Uniform integer in [0, n) without relying on library distribution details,
// which differ between standard library implementations.
std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Instance generate_synthetic(const GeneratorConfig& config, std::uint64_t seed) {
  if (config.stops < 2) throw GeneratorError("need at least two stops");
  if (config.hubs > config.stops) throw GeneratorError("hubs exceed stops");
  if (config.latent > 0 && config.latent_alphas.empty()) throw GeneratorError("latent trips need class alphas");
  if (config.latent_alphas.size() != config.latent_shares.size()) {
    throw GeneratorError("latent_alphas and latent_shares differ in length");
  }
  if (config.max_riders < 1) throw GeneratorError("max_riders must be positive");
  if (config.area_km <= 0.0 || config.speed_kmh <= 0.0) throw GeneratorError("area and speed must be positive");

  std::mt19937_64 rng(seed);
  const std::size_t n = config.stops;

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = unit(rng) * config.area_km;
    y[i] = unit(rng) * config.area_km;
  }

  InstanceData d;
  d.stops.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.stops[i] = static_cast<int>(i);
  d.time = Matrix(n, n);
  d.dist = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double km = std::hypot(x[i] - x[j], y[i] - y[j]);
      d.dist(i, j) = km;
      d.time(i, j) = km / config.speed_kmh * 60.0;
    }
  }

  // farthest-point hubs from a random first stop
  if (config.hubs > 0) {
    std::vector<double> gap(n, std::numeric_limits<double>::infinity());
    StopIndex next = draw(rng, n);
    for (std::size_t k = 0; k < config.hubs; ++k) {
      d.hubs.push_back(next);
      for (std::size_t i = 0; i < n; ++i) gap[i] = std::min(gap[i], d.dist(next, i));
      next = static_cast<StopIndex>(std::max_element(gap.begin(), gap.end()) - gap.begin());
    }
    std::sort(d.hubs.begin(), d.hubs.end());
  }

  // income classes: nearest of one center per class
  const std::size_t classes = 1 + config.latent_alphas.size();
  if (classes > n) throw GeneratorError("more income classes than stops");
  // distinct centers, so every class owns at least its center
  std::vector<StopIndex> centers;
  while (centers.size() < classes) {
    const StopIndex c = draw(rng, n);
    if (std::find(centers.begin(), centers.end(), c) == centers.end()) centers.push_back(c);
  }
  std::vector<std::size_t> stop_class(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < classes; ++c) {
      if (d.dist(i, centers[c]) < d.dist(i, centers[best])) best = c;
    }
    stop_class[i] = best;
  }

  std::vector<std::size_t> quota(classes, 0);
  quota[0] = config.core;
  if (config.latent > 0) {
    double total = 0.0;
    for (double s : config.latent_shares) total += s;
    std::size_t assigned = 0;
    for (std::size_t c = 1; c < classes; ++c) {
      quota[c] = static_cast<std::size_t>(std::floor(config.latent * config.latent_shares[c - 1] / total));
      assigned += quota[c];
    }
    // remainder to the largest share
    const auto big = std::max_element(config.latent_shares.begin(), config.latent_shares.end());
    quota[1 + static_cast<std::size_t>(big - config.latent_shares.begin())] += config.latent - assigned;
  }

  // A class whose cluster holds only its own center can still be hit.
  std::size_t remaining = config.core + config.latent;
  int next_id = 0;
  while (remaining > 0) {
    const StopIndex o = draw(rng, n);
    const StopIndex dest = draw(rng, n);
    const int riders = 1 + static_cast<int>(draw(rng, static_cast<std::size_t>(config.max_riders)));
    if (o == dest) continue;
    const std::size_t c = stop_class[dest];
    if (quota[c] == 0) continue;
    --quota[c];
    --remaining;
    Trip t;
    t.id = next_id++;
    t.origin = o;
    t.destination = dest;
    t.riders = riders;
    if (c > 0) {
      t.kind = TripKind::latent;
      t.alpha = config.latent_alphas[c - 1];
      t.t_cur = d.time(o, dest);
    }
    d.trips.push_back(t);
  }

  d.params = config.params;
  return Instance(std::move(d));
}

}  // namespace odmts
