#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace odmts {

using StopIndex = std::size_t;
using HubIndex = std::size_t;
using ArcIndex = std::size_t;
using TripIndex = std::size_t;

/// Sorted list of indices into Instance::trips().
using TripSet = std::vector<TripIndex>;

inline constexpr int kSchemaVersion = 1;

/// Raised for files that are not valid JSON or do not follow the instance schema.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when instance data violates an invariant. The message names the
/// first violated invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class TripKind { core, latent };

struct Trip {
  int id = 0;
  StopIndex origin = 0;
  StopIndex destination = 0;
  int riders = 1;
  TripKind kind = TripKind::core;
  double alpha = 0.0;  // latent only
  double t_cur = 0.0;  // minutes, latent only

  bool is_latent() const { return kind == TripKind::latent; }
};

enum class BusCostMode { per_distance, per_time };

struct CostParams {
  double theta = 0.001;
  double omega = 1.0;  // $/km shuttle
  BusCostMode bus_cost_mode = BusCostMode::per_distance;
  double bus_rate = 3.87;  // $/km or $/hour depending on mode
  double buses_per_leg = 16.0;
  Matrix wait;  // minutes over H x H; empty means `wait_default` everywhere
  double wait_default = 7.5;
  double ticket = 2.5;
  bool shuttle_between_hubs = false;
  std::optional<std::size_t> nearest_k;  // empty = all ordered hub pairs
  std::vector<std::pair<StopIndex, StopIndex>> fixed_arcs;
  bool fixed_arc_costed = true;
};

/// Raw instance content. Trip endpoints and fixed arcs refer to stop indices
/// (positions in `stops`), not stop ids.
struct InstanceData {
  std::vector<int> stops;       // stop ids, strictly ascending
  std::vector<StopIndex> hubs;  // stop indices, strictly ascending
  Matrix time;                  // minutes
  Matrix dist;                  // kilometers
  std::vector<Trip> trips;
  CostParams params;
};

struct HubArc {
  HubIndex from = 0;
  HubIndex to = 0;
  bool operator==(const HubArc&) const = default;
  auto operator<=>(const HubArc&) const = default;
};

/// Derived weighted costs. Bus quantities are indexed by hub, shuttle
/// quantities by stop.
struct WeightTable {
  std::vector<double> beta;          // per candidate arc, weighted
  std::vector<double> beta_dollars;  // per candidate arc, unweighted
  Matrix tau;                        // H x H
  Matrix bus_minutes;                // H x H, t_hl + wait_hl
  Matrix gamma;                      // N x N
  double varphi = 0.0;
};

/// Immutable validated problem instance.
class Instance {
 public:
  explicit Instance(InstanceData data);

  std::size_t stop_count() const { return data_.stops.size(); }
  std::size_t hub_count() const { return data_.hubs.size(); }
  const std::vector<int>& stop_ids() const { return data_.stops; }
  int stop_id(StopIndex s) const { return data_.stops[s]; }
  std::optional<StopIndex> stop_index(int id) const;

  const std::vector<StopIndex>& hubs() const { return data_.hubs; }
  StopIndex hub_stop(HubIndex h) const { return data_.hubs[h]; }
  std::optional<HubIndex> hub_of(StopIndex s) const;
  bool is_hub(StopIndex s) const { return hub_of(s).has_value(); }

  double time(StopIndex i, StopIndex j) const { return data_.time(i, j); }
  double dist(StopIndex i, StopIndex j) const { return data_.dist(i, j); }
  const Matrix& time_matrix() const { return data_.time; }
  const Matrix& dist_matrix() const { return data_.dist; }
  double wait(HubIndex h, HubIndex l) const;

  const std::vector<Trip>& trips() const { return data_.trips; }
  const Trip& trip(TripIndex r) const { return data_.trips[r]; }
  const CostParams& params() const { return data_.params; }
  const InstanceData& data() const { return data_; }

  /// Candidate arcs sorted by (from, to); closed forever if absent.
  const std::vector<HubArc>& arcs() const { return arcs_; }
  std::size_t arc_count() const { return arcs_.size(); }
  std::optional<ArcIndex> arc_index(HubIndex from, HubIndex to) const;
  const std::vector<ArcIndex>& fixed_arcs() const { return fixed_; }

  const WeightTable& weights() const { return weights_; }

  TripSet core_trips() const;
  TripSet latent_trips() const;
  TripSet all_trips() const;

 private:
  InstanceData data_;
  std::vector<std::ptrdiff_t> hub_of_stop_;
  std::vector<HubArc> arcs_;
  std::vector<std::ptrdiff_t> arc_lookup_;  // H x H, -1 when not a candidate
  std::vector<ArcIndex> fixed_;
  WeightTable weights_;
};

/// Weighted costs per the leader/follower objective:
/// beta = (1-theta) b n d (or b_time n t/60), tau = theta (t + wait),
/// gamma = (1-theta) omega d + theta t, varphi = (1-theta) ticket.
WeightTable derive_weights(const Instance& inst);

/// Checks every invariant and throws ValidationError on the first violation.
void validate(const InstanceData& data);

Instance load_instance(const std::filesystem::path& path);
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);
void save_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace odmts
