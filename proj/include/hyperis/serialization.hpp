#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperis/asymptotics.hpp"
#include "hyperis/clusters.hpp"
#include "hyperis/exact_oracle.hpp"
#include "hyperis/polymers.hpp"
#include "hyperis/sampler.hpp"

// Exact values travel as strings ("-3/8", "123456789...") so nothing passes through binary floating point.
namespace hyperis::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json to_json(const Rat& q) { return to_string(q); }
inline json to_json(const BigInt& v) { return v.str(); }
inline Rat rat_from(const json& j) { return parse_rational(j.get<std::string>()); }
inline BigInt bigint_from(const json& j) { return parse_bigint(j.get<std::string>()); }

inline json real_json(const Real& x, unsigned digits) { return format_real(x, static_cast<int>(digits)); }

// ---- polynomials ----------------------------------------------------------------------------

inline json to_json(const sym::Poly& p) {
  json terms = json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    json exps = json::object();
    for (std::size_t i = 0; i < sym::kVarCount; ++i) {
      const auto v = static_cast<sym::Var>(i);
      if (it->first[v]) exps[std::string(sym::var_ascii(v))] = it->first[v];
    }
    terms.push_back({{"coeff", to_json(it->second)}, {"exp", exps}});
  }
  return {{"text", p.to_string()}, {"terms", terms}};
}

inline sym::Var var_from_ascii(const std::string& name) {
  for (std::size_t i = 0; i < sym::kVarCount; ++i)
    if (sym::var_ascii(static_cast<sym::Var>(i)) == name) return static_cast<sym::Var>(i);
  throw PreconditionError("unknown variable '" + name + "'");
}

inline sym::Poly poly_from(const json& j) {
  sym::Poly p;
  for (const auto& t : j.at("terms")) {
    sym::Monomial m;
    for (const auto& [name, e] : t.at("exp").items()) m.at(var_from_ascii(name)) = e.get<std::uint8_t>();
    p += sym::Poly::monomial(m, rat_from(t.at("coeff")));
  }
  return p;
}

inline json to_json(const sym::RatFunc& f) {
  return {{"text", f.to_string()},
          {"numerator", to_json(f.numerator())},
          {"beta_power", f.beta_power()},
          {"one_minus_beta_power", f.one_minus_beta_power()}};
}

inline sym::RatFunc ratfunc_from(const json& j) {
  return sym::RatFunc(poly_from(j.at("numerator")), j.at("beta_power").get<unsigned>(),
                      j.at("one_minus_beta_power").get<unsigned>());
}

// ---- oracle ---------------------------------------------------------------------------------

inline json to_json(const SizeProfile& p) {
  json counts = json::array();
  for (const auto& c : p.counts) counts.push_back(to_json(c));
  return {{"kind", "size_profile"}, {"version", kSchemaVersion}, {"d", p.d}, {"counts", counts},
          {"total", to_json(p.total())}};
}

inline SizeProfile size_profile_from(const json& j) {
  SizeProfile p;
  p.d = j.at("d").get<int>();
  for (const auto& c : j.at("counts")) p.counts.push_back(bigint_from(c));
  return p;
}

// ---- polymers -------------------------------------------------------------------------------

inline json to_json(const DefectType& t) {
  return {{"key", t.key()}, {"cert", t.cert}, {"size", t.size}, {"deficiency", t.deficiency},
          {"canonical", t.canonical}};
}

inline DefectType defect_type_from(const json& j) {
  DefectType t;
  t.cert = j.at("cert").get<std::string>();
  t.size = j.at("size").get<unsigned>();
  t.deficiency = j.at("deficiency").get<long>();
  t.canonical = j.at("canonical").get<bool>();
  return t;
}

inline json to_json(const Census& c) {
  json entries = json::array();
  for (const auto& [t, e] : c.entries) {
    json row = to_json(t);
    row["count"] = to_json(e.count);
    row["rooted"] = e.rooted;
    row["nbhd"] = t.nbhd_at(c.d);
    entries.push_back(row);
  }
  return {{"kind", "census"}, {"version", kSchemaVersion}, {"d", c.d}, {"max_size", c.max_size},
          {"entries", entries}, {"warnings", c.warnings}};
}

inline Census census_from(const json& j) {
  Census c;
  c.d = j.at("d").get<int>();
  c.max_size = j.at("max_size").get<int>();
  for (const auto& row : j.at("entries")) {
    CensusEntry e;
    e.type = defect_type_from(row);
    e.count = bigint_from(row.at("count"));
    e.rooted = row.at("rooted").get<std::uint64_t>();
    c.entries.emplace(e.type, e);
  }
  c.warnings = j.at("warnings").get<std::vector<std::string>>();
  return c;
}

inline json to_json(const SymbolicCensus& c) {
  json entries = json::array();
  for (const auto& [t, p] : c.per_vertex) {
    json row = to_json(t);
    row["per_vertex"] = to_json(p);
    entries.push_back(row);
  }
  json grid = json::object();
  for (const auto& [k, ds] : c.grid) grid[std::to_string(k)] = ds;
  return {{"kind", "symbolic_census"}, {"version", kSchemaVersion}, {"max_size", c.max_size},
          {"entries", entries}, {"grid", grid}, {"warnings", c.warnings}};
}

// ---- clusters -------------------------------------------------------------------------------

inline json to_json(const ClusterSum& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs) coeffs.push_back(to_json(c));
  return {{"kind", "cluster_sum"}, {"version", kSchemaVersion}, {"d", s.d}, {"k", s.k},
          {"observable", s.observable.name()}, {"coeffs", coeffs}, {"r_poly", to_json(s.r_poly())}};
}

inline ClusterSum cluster_sum_from(const json& j) {
  ClusterSum s;
  s.d = j.at("d").get<int>();
  s.k = j.at("k").get<int>();
  s.observable = Observable::parse(j.at("observable").get<std::string>());
  for (const auto& c : j.at("coeffs")) s.coeffs.push_back(rat_from(c));
  return s;
}

// ---- asymptotics ----------------------------------------------------------------------------

inline json ratfunc_list(const std::vector<sym::RatFunc>& v, const std::string& prefix) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back({{"j", i + 1}, {"name", prefix + std::to_string(i + 1)}, {"poly", to_json(v[i])}});
  }
  return out;
}

inline std::vector<sym::RatFunc> ratfunc_list_from(const json& j) {
  std::vector<sym::RatFunc> out;
  for (const auto& row : j) out.push_back(ratfunc_from(row.at("poly")));
  return out;
}

inline json to_json(const asym::PTable& t) {
  return {{"kind", "p_table"}, {"version", kSchemaVersion}, {"t", t.t}, {"r", t.r},
          {"B", ratfunc_list(t.B, "B")}, {"P", ratfunc_list(t.P, "P")},
          {"log_part", ratfunc_list(t.log_part, "P")}, {"r_part", ratfunc_list(t.r_part, "P")}};
}

inline asym::PTable p_table_from(const json& j) {
  asym::PTable t;
  t.t = j.at("t").get<int>();
  t.r = j.at("r").get<int>();
  t.B = ratfunc_list_from(j.at("B"));
  t.P = ratfunc_list_from(j.at("P"));
  t.log_part = ratfunc_list_from(j.at("log_part"));
  t.r_part = ratfunc_list_from(j.at("r_part"));
  return t;
}

inline json to_json(const asym::LogCount& c) {
  json terms = json::array();
  for (const auto& [name, v] : c.terms) terms.push_back({{"name", name}, {"value", real_json(v, c.digits)}});
  PrecisionScope ps(c.digits);
  return {{"kind", "log_count"}, {"version", kSchemaVersion}, {"value", real_json(c.value, c.digits)},
          {"log10_value", real_json(c.log10_value(), c.digits)},
          {"digits", c.digits}, {"terms", terms}, {"warnings", c.warnings}};
}

inline asym::LogCount log_count_from(const json& j) {
  asym::LogCount c;
  c.digits = j.at("digits").get<unsigned>();
  PrecisionScope ps(c.digits);
  c.value = Real(j.at("value").get<std::string>());
  for (const auto& t : j.at("terms"))
    c.terms.emplace_back(t.at("name").get<std::string>(), Real(t.at("value").get<std::string>()));
  c.warnings = j.at("warnings").get<std::vector<std::string>>();
  return c;
}

// ---- sampler --------------------------------------------------------------------------------

inline json to_json(const stats::TestResult& t) {
  json bins = json::array();
  for (const auto& [o, e] : t.bins) bins.push_back({o, e});
  return {{"statistic", t.statistic}, {"df", t.df}, {"p_value", t.p_value}, {"bins", bins}};
}

inline json to_json(const stats::Moments& m) {
  return {{"n", m.n}, {"mean", m.mean}, {"variance", m.variance}, {"skewness", m.skewness},
          {"excess_kurtosis", m.excess_kurtosis}};
}

inline json to_json(const mc::DefectSummary& s) {
  json types = json::array();
  for (const auto& t : s.types) {
    json row = to_json(t.type);
    row["moments"] = to_json(t.moments);
    row["se"] = t.se;
    row["var_mean_ratio"] = t.var_mean_ratio;
    if (t.n_T) row["n_T"] = to_json(*t.n_T);
    if (t.w_T) row["w_T"] = to_json(*t.w_T);
    if (t.m_T) row["m_T"] = *t.m_T;
    if (t.z) row["z"] = *t.z;
    if (t.poisson) row["poisson_gof"] = to_json(*t.poisson);
    types.push_back(row);
  }
  json out = {{"kind", "defect_summary"}, {"version", kSchemaVersion}, {"samples", s.samples},
              {"odd_side", s.odd_side}, {"size", to_json(s.size)}, {"size_se", s.size_se},
              {"gamma_size", to_json(s.gamma_size)}, {"gamma_nbhd", to_json(s.gamma_nbhd)},
              {"types", types}, {"notes", s.notes}};
  if (s.jb_gamma_size) out["jarque_bera_gamma_size"] = to_json(*s.jb_gamma_size);
  if (s.jb_gamma_nbhd) out["jarque_bera_gamma_nbhd"] = to_json(*s.jb_gamma_nbhd);
  if (s.joint) {
    out["joint"] = to_json(*s.joint);
    out["joint"]["types"] = {s.joint_pair->first, s.joint_pair->second};
  }
  return out;
}

}  // namespace hyperis::io
