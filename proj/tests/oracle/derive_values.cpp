// Prints the reference numbers frozen into the unit tests, computed with the
// brute-force oracles only.

#include <cstdio>

#include "oracles.hpp"
#include "random_instances.hpp"

using namespace odmts;

namespace {

void print_route(const char* label, const oracle::PathResult& r) {
  std::printf("%s: g=%.17g f=%.17g money=%.17g km=%.17g legs=%zu paths=%zu\n", label, r.g, r.f, r.money, r.km,
              r.legs.size(), r.paths);
}

}  // namespace

int main() {
  const Instance ex(testkit::routing_example_data(0.5));
  const Trip& trip = ex.trip(0);
  Design none(ex.arc_count());
  Design one(ex.arc_count());
  one.set(*ex.arc_index(0, 1), true);
  Design both = one;
  both.set(*ex.arc_index(1, 0), true);

  print_route("route z12", oracle::brute_route(ex, trip, one));
  print_route("route empty", oracle::brute_route(ex, trip, none));

  // every design value of the one-trip problem, for the cut and master examples
  for (double scale : {0.5, 0.75}) {
    const Instance inst(testkit::routing_example_data(scale));
    const auto best = oracle::brute_dfd(inst, {0}, Design(inst.arc_count()));
    std::printf("dfd bus_scale=%.2f: open=%zu objective=%.17g\n", scale, best.design.open_count(), best.objective);
    for (const Design& z : oracle::brute_designs(inst, Design(inst.arc_count()))) {
      std::printf("  design open=%zu value=%.17g\n", z.open_count(), oracle::brute_dfd_value(inst, {0}, z));
    }
  }

  // extended example: one more core trip with two riders and a latent adopter
  InstanceData d = testkit::routing_example_data(0.5);
  Trip core2 = d.trips[0];
  core2.id = 1;
  core2.riders = 2;
  Trip latent = d.trips[0];
  latent.id = 2;
  latent.kind = TripKind::latent;
  latent.alpha = 1.0;
  latent.t_cur = 25.0;
  d.trips = {d.trips[0], core2, latent};
  d.trips.erase(d.trips.begin());
  const Instance ext(std::move(d));
  std::printf("eval extended both=%.17g empty=%.17g\n", oracle::brute_eval(ext, both), oracle::brute_eval(ext, none));

  // complete digraph on three nodes
  std::vector<HubArc> complete;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (a != b) complete.push_back({a, b});
    }
  }
  std::printf("cycles complete3=%zu\n", oracle::brute_cycles(3, complete).size());
  std::vector<HubArc> complete4;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      if (a != b) complete4.push_back({a, b});
    }
  }
  std::printf("cycles complete4=%zu\n", oracle::brute_cycles(4, complete4).size());
  return 0;
}
