#include "odmts/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace odmts {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& message) {
  if (!cond) throw ValidationError(message);
}

void check_matrix(const Matrix& m, std::size_t n, const std::string& name) {
  require(m.rows() == n && m.cols() == n, name + " matrix must be square over stops");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      require(std::isfinite(v) && v >= 0.0, name + " entries must be finite and non-negative");
    }
    require(m(i, i) == 0.0, name + " diagonal must be zero");
  }
}

std::vector<HubArc> candidate_arcs(const InstanceData& data) {
  const std::size_t hubs = data.hubs.size();
  std::vector<HubArc> arcs;
  for (HubIndex h = 0; h < hubs; ++h) {
    std::vector<HubIndex> others;
    for (HubIndex l = 0; l < hubs; ++l) {
      if (l != h) others.push_back(l);
    }
    if (data.params.nearest_k) {
      const auto& t = data.time;
      std::stable_sort(others.begin(), others.end(), [&](HubIndex a, HubIndex b) {
        return t(data.hubs[h], data.hubs[a]) < t(data.hubs[h], data.hubs[b]);
      });
      if (others.size() > *data.params.nearest_k) others.resize(*data.params.nearest_k);
      std::sort(others.begin(), others.end());
    }
    for (HubIndex l : others) arcs.push_back({h, l});
  }
  return arcs;
}

std::optional<HubIndex> find_hub(const std::vector<StopIndex>& hubs, StopIndex s) {
  auto it = std::lower_bound(hubs.begin(), hubs.end(), s);
  if (it == hubs.end() || *it != s) return std::nullopt;
  return static_cast<HubIndex>(it - hubs.begin());
}

}  // namespace

void validate(const InstanceData& data) {
  const std::size_t n = data.stops.size();
  for (std::size_t i = 1; i < n; ++i) {
    require(data.stops[i - 1] < data.stops[i], "stop ids must be strictly ascending");
  }
  for (std::size_t i = 0; i < data.hubs.size(); ++i) {
    require(data.hubs[i] < n, "hub is not a stop");
    require(i == 0 || data.hubs[i - 1] < data.hubs[i], "hubs must be strictly ascending and unique");
  }
  check_matrix(data.time, n, "time");
  check_matrix(data.dist, n, "dist");

  std::vector<int> ids;
  for (const Trip& r : data.trips) {
    const std::string tag = "trip " + std::to_string(r.id) + ": ";
    require(r.origin < n && r.destination < n, tag + "unknown stop");
    require(r.origin != r.destination, tag + "origin equals destination");
    require(r.riders > 0, tag + "riders must be positive");
    if (r.is_latent()) {
      require(std::isfinite(r.alpha) && r.alpha >= 1.0, tag + "latent alpha must be >= 1");
      require(std::isfinite(r.t_cur) && r.t_cur > 0.0, tag + "latent t_cur must be positive");
    } else {
      require(r.alpha == 0.0 && r.t_cur == 0.0, tag + "core trip must not carry alpha or t_cur");
    }
    ids.push_back(r.id);
  }
  std::sort(ids.begin(), ids.end());
  require(std::adjacent_find(ids.begin(), ids.end()) == ids.end(), "duplicate trip id");

  const CostParams& p = data.params;
  require(p.theta >= 0.0 && p.theta <= 1.0, "theta out of range");
  require(p.omega >= 0.0, "omega must be non-negative");
  require(p.bus_rate >= 0.0, "bus cost rate must be non-negative");
  require(p.ticket >= 0.0, "ticket must be non-negative");
  require(p.buses_per_leg >= 0.0, "buses_per_leg must be non-negative");
  require(p.wait_default >= 0.0, "wait entries must be non-negative");
  const std::size_t hubs = data.hubs.size();
  if (p.wait.rows() != 0 || p.wait.cols() != 0) {
    require(p.wait.rows() == hubs && p.wait.cols() == hubs, "wait matrix must be square over hubs");
    for (double w : p.wait.data()) require(std::isfinite(w) && w >= 0.0, "wait entries must be non-negative");
  }
  require(!p.nearest_k || *p.nearest_k > 0, "nearest-k must be positive");

  const auto arcs = candidate_arcs(data);
  std::vector<long> balance(hubs, 0);
  std::vector<std::pair<StopIndex, StopIndex>> seen;
  for (auto [from, to] : p.fixed_arcs) {
    const auto h = from < n ? find_hub(data.hubs, from) : std::nullopt;
    const auto l = to < n ? find_hub(data.hubs, to) : std::nullopt;
    require(h && l, "fixed arc endpoint is not a hub");
    require(std::binary_search(arcs.begin(), arcs.end(), HubArc{*h, *l}),
            "fixed arc is not a candidate arc");
    seen.emplace_back(from, to);
    ++balance[*h];
    --balance[*l];
  }
  std::sort(seen.begin(), seen.end());
  require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(), "duplicate fixed arc");
  require(std::all_of(balance.begin(), balance.end(), [](long b) { return b == 0; }),
          "fixed arcs violate weak connectivity");
}

Instance::Instance(InstanceData data) : data_(std::move(data)) {
  validate(data_);
  hub_of_stop_.assign(stop_count(), -1);
  for (HubIndex h = 0; h < hub_count(); ++h) hub_of_stop_[data_.hubs[h]] = static_cast<std::ptrdiff_t>(h);

  arcs_ = candidate_arcs(data_);
  arc_lookup_.assign(hub_count() * hub_count(), -1);
  for (ArcIndex a = 0; a < arcs_.size(); ++a) {
    arc_lookup_[arcs_[a].from * hub_count() + arcs_[a].to] = static_cast<std::ptrdiff_t>(a);
  }
  for (auto [from, to] : data_.params.fixed_arcs) {
    fixed_.push_back(*arc_index(*hub_of(from), *hub_of(to)));
  }
  std::sort(fixed_.begin(), fixed_.end());
  weights_ = derive_weights(*this);
}

std::optional<StopIndex> Instance::stop_index(int id) const {
  auto it = std::lower_bound(data_.stops.begin(), data_.stops.end(), id);
  if (it == data_.stops.end() || *it != id) return std::nullopt;
  return static_cast<StopIndex>(it - data_.stops.begin());
}

std::optional<HubIndex> Instance::hub_of(StopIndex s) const {
  const auto h = hub_of_stop_[s];
  if (h < 0) return std::nullopt;
  return static_cast<HubIndex>(h);
}

double Instance::wait(HubIndex h, HubIndex l) const {
  const Matrix& w = data_.params.wait;
  return w.rows() == 0 ? data_.params.wait_default : w(h, l);
}

std::optional<ArcIndex> Instance::arc_index(HubIndex from, HubIndex to) const {
  const auto a = arc_lookup_[from * hub_count() + to];
  if (a < 0) return std::nullopt;
  return static_cast<ArcIndex>(a);
}

TripSet Instance::core_trips() const {
  TripSet out;
  for (TripIndex r = 0; r < data_.trips.size(); ++r) {
    if (!data_.trips[r].is_latent()) out.push_back(r);
  }
  return out;
}

TripSet Instance::latent_trips() const {
  TripSet out;
  for (TripIndex r = 0; r < data_.trips.size(); ++r) {
    if (data_.trips[r].is_latent()) out.push_back(r);
  }
  return out;
}

TripSet Instance::all_trips() const {
  TripSet out(data_.trips.size());
  std::iota(out.begin(), out.end(), TripIndex{0});
  return out;
}

WeightTable derive_weights(const Instance& inst) {
  const CostParams& p = inst.params();
  const double cost_w = 1.0 - p.theta;
  const std::size_t n = inst.stop_count();
  const std::size_t hubs = inst.hub_count();

  WeightTable w;
  w.varphi = cost_w * p.ticket;
  w.tau = Matrix(hubs, hubs);
  w.bus_minutes = Matrix(hubs, hubs);
  for (HubIndex h = 0; h < hubs; ++h) {
    for (HubIndex l = 0; l < hubs; ++l) {
      const double minutes = inst.time(inst.hub_stop(h), inst.hub_stop(l)) + inst.wait(h, l);
      w.bus_minutes(h, l) = minutes;
      w.tau(h, l) = p.theta * minutes;
    }
  }
  w.gamma = Matrix(n, n);
  for (StopIndex i = 0; i < n; ++i) {
    for (StopIndex j = 0; j < n; ++j) {
      w.gamma(i, j) = cost_w * p.omega * inst.dist(i, j) + p.theta * inst.time(i, j);
    }
  }

  const auto& fixed = inst.fixed_arcs();
  for (ArcIndex a = 0; a < inst.arc_count(); ++a) {
    const StopIndex from = inst.hub_stop(inst.arcs()[a].from);
    const StopIndex to = inst.hub_stop(inst.arcs()[a].to);
    double dollars = p.bus_cost_mode == BusCostMode::per_distance
                         ? p.bus_rate * p.buses_per_leg * inst.dist(from, to)
                         : p.bus_rate * p.buses_per_leg * inst.time(from, to) / 60.0;
    if (!p.fixed_arc_costed && std::binary_search(fixed.begin(), fixed.end(), a)) dollars = 0.0;
    w.beta_dollars.push_back(dollars);
    w.beta.push_back(cost_w * dollars);
  }
  return w;
}

// ---------------------------------------------------------------------------
// JSON schema

namespace {

Matrix read_matrix(const json& j, std::size_t n, const char* name) {
  Matrix m(n, n);
  if (!j.is_array()) throw ParseError(std::string(name) + " must be an array");
  if (j.size() == n * n && (n == 0 || !j[0].is_array())) {
    for (std::size_t k = 0; k < n * n; ++k) m(k / n, k % n) = j[k].get<double>();
    return m;
  }
  if (j.size() != n) throw ValidationError(std::string(name) + " matrix must be square over stops");
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) {
      throw ValidationError(std::string(name) + " matrix must be square over stops");
    }
    for (std::size_t k = 0; k < n; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json write_matrix(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

StopIndex lookup_stop(const std::vector<int>& stops, int id, const std::string& context) {
  auto it = std::lower_bound(stops.begin(), stops.end(), id);
  if (it == stops.end() || *it != id) {
    throw ValidationError(context + "unknown stop " + std::to_string(id));
  }
  return static_cast<StopIndex>(it - stops.begin());
}

InstanceData from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  if (!j.contains("schema")) throw ParseError("missing mandatory field 'schema'");
  if (j.at("schema").get<int>() != kSchemaVersion) throw ParseError("unsupported schema version");

  InstanceData d;
  d.stops = j.at("stops").get<std::vector<int>>();
  for (std::size_t i = 1; i < d.stops.size(); ++i) {
    if (d.stops[i - 1] >= d.stops[i]) throw ValidationError("stop ids must be strictly ascending");
  }
  for (int id : j.at("hubs").get<std::vector<int>>()) {
    d.hubs.push_back(lookup_stop(d.stops, id, "hub: "));
  }
  std::sort(d.hubs.begin(), d.hubs.end());
  const std::size_t n = d.stops.size();
  d.time = read_matrix(j.at("time"), n, "time");
  d.dist = read_matrix(j.at("dist"), n, "dist");

  for (const json& t : j.at("trips")) {
    Trip r;
    r.id = t.at("id").get<int>();
    const std::string tag = "trip " + std::to_string(r.id) + ": ";
    r.origin = lookup_stop(d.stops, t.at("origin").get<int>(), tag);
    r.destination = lookup_stop(d.stops, t.at("destination").get<int>(), tag);
    r.riders = t.at("riders").get<int>();
    const std::string kind = t.at("kind").get<std::string>();
    if (kind == "core") {
      r.kind = TripKind::core;
      if (t.contains("alpha") || t.contains("t_cur")) {
        throw ValidationError(tag + "core trip must not carry alpha or t_cur");
      }
    } else if (kind == "latent") {
      r.kind = TripKind::latent;
      r.alpha = t.at("alpha").get<double>();
      r.t_cur = t.at("t_cur").get<double>();
    } else {
      throw ParseError(tag + "kind must be 'core' or 'latent'");
    }
    d.trips.push_back(r);
  }

  const json& pj = j.at("params");
  CostParams& p = d.params;
  p.theta = pj.at("theta").get<double>();
  p.omega = pj.at("omega").get<double>();
  const json& bus = pj.at("bus_cost");
  const std::string mode = bus.at("mode").get<std::string>();
  if (mode == "per-distance") {
    p.bus_cost_mode = BusCostMode::per_distance;
  } else if (mode == "per-time") {
    p.bus_cost_mode = BusCostMode::per_time;
  } else {
    throw ParseError("bus_cost.mode must be 'per-distance' or 'per-time'");
  }
  p.bus_rate = bus.at("rate").get<double>();
  p.buses_per_leg = pj.at("buses_per_leg").get<double>();
  const json& wait = pj.at("wait");
  if (wait.is_number()) {
    p.wait_default = wait.get<double>();
  } else {
    const std::size_t h = d.hubs.size();
    p.wait = Matrix(h, h);
    if (!wait.is_array() || wait.size() != h) throw ValidationError("wait matrix must be square over hubs");
    for (std::size_t a = 0; a < h; ++a) {
      if (wait[a].size() != h) throw ValidationError("wait matrix must be square over hubs");
      for (std::size_t b = 0; b < h; ++b) p.wait(a, b) = wait[a][b].get<double>();
    }
  }
  p.ticket = pj.at("ticket").get<double>();
  p.shuttle_between_hubs = pj.value("shuttle_between_hubs", false);
  const json cand = pj.value("candidate_arcs", json("all"));
  if (cand.is_string()) {
    if (cand.get<std::string>() != "all") throw ParseError("candidate_arcs must be 'all' or {\"nearest\": k}");
  } else {
    p.nearest_k = cand.at("nearest").get<std::size_t>();
  }
  for (const json& arc : pj.value("fixed_arcs", json::array())) {
    if (!arc.is_array() || arc.size() != 2) throw ParseError("fixed arc must be a [from, to] pair");
    p.fixed_arcs.emplace_back(lookup_stop(d.stops, arc[0].get<int>(), "fixed arc: "),
                              lookup_stop(d.stops, arc[1].get<int>(), "fixed arc: "));
  }
  p.fixed_arc_costed = pj.value("fixed_arc_costed", true);
  return d;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed instance file: ") + e.what());
  }
  try {
    return Instance(from_json(j));
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance schema error: ") + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
  const InstanceData& d = inst.data();
  json j;
  j["schema"] = kSchemaVersion;
  j["stops"] = d.stops;
  json hubs = json::array();
  for (StopIndex h : d.hubs) hubs.push_back(d.stops[h]);
  j["hubs"] = hubs;
  j["time"] = write_matrix(d.time);
  j["dist"] = write_matrix(d.dist);
  json trips = json::array();
  for (const Trip& r : d.trips) {
    json t;
    t["id"] = r.id;
    t["origin"] = d.stops[r.origin];
    t["destination"] = d.stops[r.destination];
    t["riders"] = r.riders;
    t["kind"] = r.is_latent() ? "latent" : "core";
    if (r.is_latent()) {
      t["alpha"] = r.alpha;
      t["t_cur"] = r.t_cur;
    }
    trips.push_back(std::move(t));
  }
  j["trips"] = std::move(trips);

  const CostParams& p = d.params;
  json pj;
  pj["theta"] = p.theta;
  pj["omega"] = p.omega;
  pj["bus_cost"] = {{"mode", p.bus_cost_mode == BusCostMode::per_distance ? "per-distance" : "per-time"},
                    {"rate", p.bus_rate}};
  pj["buses_per_leg"] = p.buses_per_leg;
  pj["wait"] = p.wait.rows() == 0 ? json(p.wait_default) : write_matrix(p.wait);
  pj["ticket"] = p.ticket;
  pj["shuttle_between_hubs"] = p.shuttle_between_hubs;
  pj["candidate_arcs"] = p.nearest_k ? json{{"nearest", *p.nearest_k}} : json("all");
  json fixed = json::array();
  for (auto [from, to] : p.fixed_arcs) fixed.push_back({d.stops[from], d.stops[to]});
  pj["fixed_arcs"] = std::move(fixed);
  pj["fixed_arc_costed"] = p.fixed_arc_costed;
  j["params"] = std::move(pj);
  return j.dump(1) + "\n";
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  out << serialize_instance(inst);
  if (!out) throw std::runtime_error("failed writing instance file " + path.string());
}

}  // namespace odmts
