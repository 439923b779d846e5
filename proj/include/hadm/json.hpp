#pragma once

// JSON encodings of reports. Rationals are strings "p/q" (or "p").

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "hadm/defect.hpp"
#include "hadm/fourier_tangent.hpp"
#include "hadm/regularity.hpp"
#include "hadm/spectrum.hpp"

namespace hadm::json {

using nlohmann::ordered_json;

inline std::string rational_str(const mpq_class& q) { return q.get_str(); }

inline ordered_json to_json(const DefectReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["method"] = to_string(r.method);
  j["dimension"] = r.dimension;
  if (r.gap && std::isfinite(*r.gap))
    j["gap"] = *r.gap;
  else
    j["gap"] = nullptr;  // exact methods, or no nonzero singular value dropped
  j["wall_ms"] = r.wall_ms;
  return j;
}

inline ordered_json to_json(const SignedMeasure& m) {
  ordered_json atoms = ordered_json::array();
  for (const auto& [k, w] : m.atoms()) atoms.push_back({k, rational_str(w)});
  return {{"atoms", atoms}};
}

inline SignedMeasure measure_from_json(const ordered_json& j) {
  SignedMeasure m;
  for (const auto& a : j.at("atoms")) m.add(a.at(0).get<std::int64_t>(), mpq_class(a.at(1).get<std::string>()));
  return m;
}

inline ordered_json to_json(const PhaseAssignment& p) { return {{"s", p.s}, {"a", p.a}, {"b", p.b}}; }

inline ordered_json to_json(const GBResult& r) {
  return {{"value", r.value}, {"exact", r.exact}, {"witness", to_json(r.witness)}};
}

inline ordered_json to_json(const CycleCertificate& c) {
  ordered_json out = ordered_json::array();
  for (const auto& cyc : c) out.push_back({{"p", cyc.p}, {"rotation", cyc.rotation}});
  return out;
}

inline ordered_json to_json(const RegularityReport& r) {
  ordered_json pairs = ordered_json::array();
  for (const auto& p : r.pairs) {
    ordered_json e = {{"i", p.i}, {"j", p.j}};
    e["certificate"] = p.certificate ? to_json(*p.certificate) : ordered_json(nullptr);
    pairs.push_back(std::move(e));
  }
  return {{"regular", r.regular}, {"pairs", pairs}};
}

inline ordered_json to_json(const FourierBasis& fb) {
  ordered_json out = ordered_json::array();
  for (std::size_t k = 0; k < fb.basis.size(); ++k) {
    const auto& l = fb.labels[k];
    const auto& a = fb.basis[k];
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::vector<std::int64_t> row(a.values().begin() + std::ptrdiff_t(i * a.size()),
                                    a.values().begin() + std::ptrdiff_t((i + 1) * a.size()));
      rows.push_back(row);
    }
    out.push_back({{"G", l.g.r}, {"H", l.h.r}, {"g", l.x}, {"h", l.y}, {"matrix", rows}});
  }
  return out;
}

inline ordered_json to_json(const ParametrizationReport& r) {
  ordered_json j = {{"n", r.n},
                    {"count", r.count},
                    {"expected", r.expected},
                    {"count_ok", r.count_ok},
                    {"membership_ok", r.membership_ok},
                    {"independent_ok", r.independent_ok}};
  j["rational_ok"] = r.rational_ok ? ordered_json(*r.rational_ok) : ordered_json(nullptr);
  j["rational_defect"] = r.rational_defect ? ordered_json(*r.rational_defect) : ordered_json(nullptr);
  return j;
}

inline ordered_json to_json(const ConjectureReport& r) {
  auto opt = [](const auto& o) { return o ? ordered_json(*o) : ordered_json(nullptr); };
  ordered_json j = {{"n", r.n}, {"s_min", r.s_min}, {"defect", r.defect}};
  j["defect_rational"] = opt(r.defect_rational);
  j["count_ones"] = r.count_ones;
  j["gb_min"] = r.gb_min ? ordered_json(r.gb_min->value) : ordered_json(nullptr);
  j["gb_max"] = r.gb_max ? ordered_json(r.gb_max->value) : ordered_json(nullptr);
  j["support"] = opt(r.support);
  j["sandwich"] = opt(r.sandwich);
  j["in_support_hull"] = opt(r.in_support_hull);
  j["ones_formula"] = r.ones_formula;
  j["skipped"] = r.skipped;
  return j;
}

}  // namespace hadm::json
