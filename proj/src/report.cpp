#include "odmts/report.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "json.hpp"

namespace odmts {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string design_json(const Instance& inst, const Design& z) {
  json arcs = json::array();
  for (ArcIndex a : z.open_arcs()) {
    const HubArc arc = inst.arcs()[a];
    arcs.push_back({inst.stop_id(inst.hub_stop(arc.from)), inst.stop_id(inst.hub_stop(arc.to))});
  }
  json j;
  j["tool_version"] = kToolVersion;
  j["open_arcs"] = arcs;
  j["fingerprint"] = fingerprint(inst, z);
  j["investment"] = investment(inst, z);
  return j.dump(1) + "\n";
}

Design parse_design(const Instance& inst, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("design file: ") + e.what());
  }
  if (!j.contains("open_arcs") || !j["open_arcs"].is_array()) throw ParseError("design file: missing open_arcs");
  Design z(inst.arc_count());
  for (const auto& pair : j["open_arcs"]) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("design file: arcs are [from, to] pairs");
    const auto from = inst.stop_index(pair[0].get<int>());
    const auto to = inst.stop_index(pair[1].get<int>());
    const auto h = from ? inst.hub_of(*from) : std::nullopt;
    const auto l = to ? inst.hub_of(*to) : std::nullopt;
    const auto a = h && l ? inst.arc_index(*h, *l) : std::nullopt;
    if (!a) throw ValidationError("design arc is not a candidate arc");
    z.set(*a, true);
  }
  return z;
}

TripSet parse_t_hat(const Instance& inst, const std::string& evaluation_text) {
  json j;
  try {
    j = json::parse(evaluation_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("evaluation file: ") + e.what());
  }
  TripSet out;
  if (!j.contains("t_hat")) return out;
  std::map<int, TripIndex> by_id;
  for (TripIndex r = 0; r < inst.trips().size(); ++r) by_id[inst.trip(r).id] = r;
  for (int id : j["t_hat"].get<std::vector<int>>()) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError("evaluation file names unknown trip " + std::to_string(id));
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string evaluation_json(const Instance& inst, const DesignEvaluation& ev, const TripSet& t_hat) {
  json j;
  j["tool_version"] = kToolVersion;
  j["objective"] = ev.objective;
  j["adopters"] = ev.adopters;
  j["r_false"] = ev.r_false;
  j["a_false"] = ev.a_false;
  std::vector<int> ids;
  for (TripIndex r : t_hat) ids.push_back(inst.trip(r).id);
  j["t_hat"] = ids;
  j["kpis"] = {{"shuttle_km", ev.kpis.shuttle_km},
               {"bus_investment", ev.kpis.bus_investment},
               {"bus_cost_dollars", ev.kpis.bus_cost_dollars},
               {"convenience_minutes", ev.kpis.convenience_minutes},
               {"agency_net_cost", ev.kpis.agency_net_cost}};
  return j.dump(1) + "\n";
}

std::string trace_csv(const std::vector<TraceRecord>& trace, const std::string& algorithm) {
  std::ostringstream out;
  out << "# tool_version=" << kToolVersion << " algorithm=" << algorithm << "\n";
  out << kTraceColumns << "\n";
  for (const TraceRecord& r : trace) {
    out << algorithm << ',' << r.stage << ',' << r.outer << ',' << r.k << ',' << r.t_hat_size << ',' << r.open_arcs
        << ',' << r.design << ',' << format_number(r.objective) << ',' << r.adopters << ','
        << format_number(r.r_false) << ',' << format_number(r.a_false) << ',' << r.admitted << ',' << r.cycles
        << "\n";
  }
  return out.str();
}

std::string timing_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream out;
  out << "row,wall_ms\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << format_number(trace[i].wall_ms) << "\n";
  return out.str();
}

std::string rounds_csv(const std::vector<RoundLog>& rounds) {
  std::ostringstream out;
  out << "round,lower,upper,open_arcs,cuts_added\n";
  for (const RoundLog& r : rounds) {
    out << r.round << ',' << format_number(r.lower) << ',' << format_number(r.upper) << ',' << r.open_arcs << ','
        << r.cuts_added << "\n";
  }
  return out.str();
}

}  // namespace odmts
