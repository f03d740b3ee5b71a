#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "isoresidual/arrangement.hpp"
#include "isoresidual/fiber_enumeration.hpp"
#include "isoresidual/monodromy.hpp"
#include "isoresidual/permgroup.hpp"
#include "isoresidual/stratum_core.hpp"

namespace isoresidual {

using Json = nlohmann::ordered_json;

inline Json to_json(const StratumSignature& sig) { return Json{{"a", sig.a}, {"b", sig.b}}; }

// Keys are the canonical subsets written "1,3".
inline Json to_json(const SignFunction& psi) {
  Json out = Json::object();
  for (const auto& I : canonical_subsets(psi.poles())) out[mask_to_string(I.mask())] = std::string(1, to_char(psi(I)));
  return out;
}

inline Json to_json(const FiberSet& f) {
  return Json{{"stratum", to_json(f.sig)}, {"psi", to_json(f.psi)}, {"trees", f.keys}};
}

inline Json to_json(const ResidueConfig& r) {
  Json out = Json::array();
  for (const auto& x : r.lambda) out.push_back(to_string(x));
  return out;
}

inline Json to_json(const GroupIdentification& id) {
  return Json{{"order", id.order.str()},
              {"transitive", id.transitive},
              {"parity", id.even ? "even" : "mixed"},
              {"identification", id.name()},
              {"degree", id.degree},
              {"stabilizer_order", id.stabilizer_order.str()}};
}

inline Json to_json(const MonodromyReport& r) {
  Json out = to_json(r.group);
  out["stratum"] = to_json(r.sig);
  out["base"] = r.base.key();
  out["meridians"] = r.meridians;
  out["distinct_generators"] = r.distinct_generators;
  out["gallery_defects"] = r.gallery_defects;
  return out;
}

inline Json to_json(const CommutatorReport& r) {
  Json out{{"secant", r.secant},
           {"first", "{" + mask_to_string(r.first) + "}"},
           {"second", "{" + mask_to_string(r.second) + "}"},
           {"chamber", r.chamber},
           {"classification", describe(r)},
           {"cycle_type", r.cycle_type}};
  if (!r.secant) out["rest"] = "{" + mask_to_string(r.rest) + "}";
  if (r.predicted) {
    std::string name = to_string(*r.predicted, r.predicted_count.value_or(0), {});
    if (!r.predicted_count) name = name.substr(0, name.find('('));
    out["predicted"] = name;
    out["matches_prediction"] = r.matches_prediction();
  } else {
    out["predicted"] = nullptr;
  }
  return out;
}

inline Json to_json(const ChamberGraph& g) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    Json walls = Json::array();
    for (const auto& w : g.walls(i)) walls.push_back(mask_to_string(w.mask()));
    nodes.push_back(Json{{"index", i}, {"psi", g.chamber(i).psi.key()}, {"witness", to_json(g.chamber(i).witness)}, {"walls", walls}});
  }
  Json edges = Json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const auto& a : g.adjacent(i)) {
      if (a.neighbor > i) edges.push_back(Json{{"from", i}, {"to", a.neighbor}, {"wall", mask_to_string(a.wall.mask())}});
    }
  }
  return Json{{"poles", g.poles()}, {"chambers", g.size()}, {"nodes", nodes}, {"edges", edges}};
}

inline Json to_json(const TopologicalClasses& t, int p) {
  return Json{{"k", t.k},
              {"classes", t.classes},
              {"shift_wall", to_string(t.shift_wall)},
              {"shift_chamber", t.shift_chamber},
              {"shift", to_cycle_string(t.shift)},
              {"poles", p}};
}

}  // namespace isoresidual
