// SPDX-License-Identifier: Apache-2.0
#include "czwarp/config_io.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "czwarp/errors.hpp"

namespace czwarp {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::invalid_argument, what); }

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items())
    if (!known.count(key)) bad("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("key '") + key + "' has the wrong type");
  }
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json quad_json(const QuadratureSpec& q) {
  return {{"base_order", q.base_order}, {"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol},
          {"max_depth", q.max_depth}};
}

json experiment_json(const ExperimentConfig& c) {
  json j = {{"m", c.m}, {"p", c.p}, {"k", c.k}, {"n_teeth", c.n_teeth}, {"C1", c.C1},
            {"C2", c.C2}, {"quad", quad_json(c.quad)}};
  j["smoothing"] = c.smoothing ? json(*c.smoothing) : json(nullptr);
  j["r_max_cap"] = c.r_max_cap;
  j["workers"] = c.workers;
  j["extra_windows"] = json::array();
  for (const auto& w : c.extra_windows) j["extra_windows"].push_back({{"k", w.k}, {"n_teeth", w.n_teeth}});
  j["strip_samples"] = c.strip_samples;
  j["envelope_samples"] = c.envelope_samples;
  return j;
}

json audit_json(const BoundAudit& a) {
  json entries = json::array();
  for (const auto& e : a.entries)
    entries.push_back({{"bound", e.bound}, {"worst", num(e.worst)}, {"location", num(e.location)},
                       {"threshold", e.threshold}, {"pass", e.pass}});
  return {{"overall_pass", a.overall_pass}, {"entries", entries}};
}

json report_json(const CZReport& r) {
  return {{"config", experiment_json(r.config)},
          {"h", r.h},
          {"eps_or_delta", r.eps_or_delta},
          {"eta", r.eta},
          {"norms",
           {{"p", r.norms.p},
            {"norm_u_p_pow", num(r.norms.norm_u_p_pow)},
            {"norm_lap_p_pow", num(r.norms.norm_lap_p_pow)},
            {"norm_hess_p_pow", num(r.norms.norm_hess_p_pow)},
            {"quadrature_error", num(r.norms.quadrature_error)},
            {"panels", r.norms.panels}}},
          {"lhs", num(r.lhs)},
          {"rhs", num(r.rhs)},
          {"ratio", num(r.ratio)},
          {"violated", r.violated},
          {"smallness", {{"step9_le_half_eta", r.flags.step9_le_half_eta},
                         {"double_exponential", r.flags.double_exponential}}},
          {"audit", audit_json(r.audit)}};
}

json carrier_json(const Carrier& c) {
  if (const auto* l = std::get_if<Line>(&c))
    return {{"type", "line"}, {"t0", l->t0}, {"y0", l->y0}, {"slope", l->slope}};
  const auto& p = std::get<PowerLaw>(c);
  return {{"type", "power"}, {"shift", p.shift}, {"exponent", p.exponent}};
}

json piece_json(const Piece& piece) {
  if (const auto* q = std::get_if<Polynomial>(&piece))
    return {{"type", "polynomial"}, {"c", q->c}};
  if (const auto* b = std::get_if<Blend>(&piece))
    return {{"type", "blend"}, {"a", b->a}, {"b", b->b}, {"from", carrier_json(b->from)},
            {"to", carrier_json(b->to)}};
  if (const auto* l = std::get_if<Line>(&piece)) return carrier_json(*l);
  return carrier_json(std::get<PowerLaw>(piece));
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("run file is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"m", "p", "k", "n_teeth", "C1", "C2", "quad", "smoothing", "r_max_cap", "workers",
                  "extra_windows", "strip_samples", "envelope_samples", "n_max", "sweep", "output",
                  "samples"},
                 "run file");
  RunConfig rc;
  ExperimentConfig& c = rc.experiment;
  read(j, "m", c.m);
  read(j, "p", c.p);
  read(j, "k", c.k);
  read(j, "n_teeth", c.n_teeth);
  read(j, "C1", c.C1);
  read(j, "C2", c.C2);
  read(j, "r_max_cap", c.r_max_cap);
  read(j, "workers", c.workers);
  read(j, "strip_samples", c.strip_samples);
  read(j, "envelope_samples", c.envelope_samples);
  read(j, "n_max", rc.n_max);
  read(j, "samples", rc.samples);
  if (j.contains("smoothing") && !j["smoothing"].is_null()) {
    double w = 0.0;
    read(j, "smoothing", w);
    c.smoothing = w;
  }
  if (j.contains("quad")) {
    const json& q = j["quad"];
    reject_unknown(q, {"base_order", "rel_tol", "abs_tol", "max_depth"}, "quad");
    read(q, "base_order", c.quad.base_order);
    read(q, "rel_tol", c.quad.rel_tol);
    read(q, "abs_tol", c.quad.abs_tol);
    read(q, "max_depth", c.quad.max_depth);
  }
  if (j.contains("extra_windows")) {
    if (!j["extra_windows"].is_array()) bad("extra_windows must be an array");
    for (const json& w : j["extra_windows"]) {
      reject_unknown(w, {"k", "n_teeth"}, "extra_windows entry");
      WindowRequest req;
      read(w, "k", req.k);
      read(w, "n_teeth", req.n_teeth);
      c.extra_windows.push_back(req);
    }
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, {"m", "p", "k", "n", "workers"}, "sweep");
    read(s, "m", rc.grid.m);
    read(s, "p", rc.grid.p);
    read(s, "k", rc.grid.k);
    read(s, "n", rc.grid.n);
    read(s, "workers", rc.sweep_workers);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, {"csv", "profile", "samples"}, "output");
    read(o, "csv", rc.csv_path);
    read(o, "profile", rc.profile_path);
    read(o, "samples", rc.samples_path);
  }
  return rc;
}

std::string run_config_to_json(const RunConfig& rc) {
  json j = experiment_json(rc.experiment);
  j["n_max"] = rc.n_max;
  j["samples"] = rc.samples;
  j["sweep"] = {{"m", rc.grid.m}, {"p", rc.grid.p}, {"k", rc.grid.k}, {"n", rc.grid.n},
                {"workers", rc.sweep_workers}};
  j["output"] = {{"csv", rc.csv_path}, {"profile", rc.profile_path}, {"samples", rc.samples_path}};
  return j.dump(2);
}

SweepGrid resolved_grid(const RunConfig& rc) {
  SweepGrid g = rc.grid;
  const ExperimentConfig& c = rc.experiment;
  if (g.m.empty()) g.m = {c.m};
  if (g.p.empty()) g.p = {c.p};
  if (g.k.empty()) g.k = {c.k};
  if (g.n.empty()) g.n = {c.n_teeth};
  return g;
}

std::string to_json(const BoundAudit& audit) { return audit_json(audit).dump(2); }

std::string to_json(const CZReport& report) { return report_json(report).dump(2); }

std::string to_json(const SearchResult& result) {
  json trace = json::array();
  for (const auto& r : result.trace)
    trace.push_back({{"n", r.config.n_teeth}, {"ratio", num(r.ratio)}, {"lhs", num(r.lhs)},
                     {"rhs", num(r.rhs)}, {"violated", r.violated},
                     {"audit_pass", r.audit.overall_pass}});
  json j;
  j["n_star"] = result.n_star ? json(*result.n_star) : json(nullptr);
  j["monotone"] = result.monotone;
  j["monotone_full"] = result.monotone_full;
  j["audit_failed"] = result.audit_failed;
  j["trace"] = trace;
  return j.dump(2);
}

std::string profile_to_json(const WarpingProfile& profile) {
  const ManifoldConfig& mc = profile.config();
  json segs = json::array();
  for (const auto& s : profile.segments())
    segs.push_back({{"lo", s.lo}, {"hi", num(s.hi)}, {"piece", piece_json(s.piece)}});
  json wins = json::array();
  for (std::size_t i = 0; i < profile.windows().size(); ++i) {
    const SawtoothWindow& w = profile.windows()[i];
    const Footprint& f = profile.extents()[i];
    wins.push_back({{"z", w.z}, {"width", w.width}, {"n_teeth", w.n_teeth}, {"step", w.step},
                    {"amplitude", w.amplitude}, {"base", w.base},
                    {"smooth_halfwidth", w.smooth_halfwidth}, {"drift", w.drift},
                    {"footprint", {f.lo, f.hi}}});
  }
  json j = {{"m", mc.m}, {"alpha", mc.alpha}, {"gamma_m", mc.gamma_m}, {"windows", wins}};
  j["cap_coefficients"] =
      profile.cap_coefficients() ? json(*profile.cap_coefficients()) : json(nullptr);
  j["segments"] = segs;
  return j.dump(2);
}

}  // namespace czwarp
