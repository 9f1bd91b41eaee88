#pragma once

#include <cstdint>
#include <vector>

#include "odmts/instance.hpp"

namespace odmts {

/// Planar random instance. Stops are uniform in a square, time is distance
/// over speed, hubs are spread by farthest-point sampling. Trips are classed
/// by the cluster of their destination stop: class 0 trips are core, the
/// others latent with the class alpha.
struct GeneratorConfig {
  std::size_t stops = 100;
  std::size_t hubs = 8;
  std::size_t core = 60;
  std::size_t latent = 140;
  std::vector<double> latent_alphas = {2.0, 1.5};
  std::vector<double> latent_shares = {819.0, 208.0};  // relative class sizes
  double area_km = 10.0;
  double speed_kmh = 30.0;
  int max_riders = 4;
  CostParams params = default_params();

  static CostParams default_params();
};

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Instance generate_synthetic(const GeneratorConfig& config, std::uint64_t seed);

}  // namespace odmts
