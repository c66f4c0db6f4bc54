#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperis/serialization.hpp"
#include "hyperis/validation/acceptance.hpp"

namespace hyperis::cli {

using io::json;

/// Exit codes: 0 ok, 1 precondition, 2 budget, 3 validation failure, 4 internal error.
enum ExitCode : int { kOk = 0, kPrecondition = 1, kBudget = 2, kValidationFailed = 3, kInternal = 4 };

/// One-line machine-parsable error record.
inline std::string error_line(const std::string& kind, int code, const std::string& message) {
  std::string flat = message;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  return json{{"error", kind}, {"exit_code", code}, {"message", flat}}.dump();
}

struct Output {
  std::string path;  // empty: standard output
};

inline void emit(const json& doc, const Output& o, std::ostream& out) {
  if (o.path.empty()) {
    out << doc.dump(2) << "\n";
    return;
  }
  std::ofstream f(o.path);
  require(static_cast<bool>(f), "cannot open output file '" + o.path + "'");
  f << doc.dump(2) << "\n";
}

inline json with_header(const std::string& kind, json body) {
  json doc = {{"kind", kind}, {"version", io::kSchemaVersion}};
  doc.update(body);
  return doc;
}

struct AsymFlags {
  unsigned threads = default_threads();
  bool allow_beyond = false;
  std::uint64_t node_budget = asym::ROptions{}.node_budget;

  void attach(CLI::App* app) {
    app->add_option("--threads", threads, "worker threads (default: HYPERIS_THREADS or 1)");
    app->add_flag("--allow-beyond-guaranteed", allow_beyond, "allow R_j with j > 3");
    app->add_option("--node-budget", node_budget, "cluster enumeration node budget");
  }
  asym::ROptions options() const { return {std::max(1u, threads), allow_beyond, node_budget}; }
};

inline json log_count_json(const asym::LogCount& c) { return io::to_json(c); }

// ---- report ---------------------------------------------------------------------------------

namespace detail {

inline std::string file_safe(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  return s;
}

inline std::string short_num(const Real& x) { return format_real(x, 8); }

inline void write_xy(const std::filesystem::path& p, const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream f(p);
  require(static_cast<bool>(f), "cannot open plot file '" + p.string() + "'");
  for (const auto& [x, y] : rows) f << x << " " << y << "\n";
}

struct Loaded {
  std::string path;
  json doc;
};

}  // namespace detail

/// Comparison table (markdown) plus x-y plot files for truncation errors and GOF bins.
inline std::string build_report(const std::vector<detail::Loaded>& docs, const std::string& plot_dir) {
  PrecisionScope ps(50);
  std::map<int, SizeProfile> oracles;
  for (const auto& l : docs)
    if (l.doc.value("kind", "") == "size_profile") {
      auto p = io::size_profile_from(l.doc);
      oracles[p.d] = std::move(p);
    }

  std::ostringstream os;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> plots;

  os << "## Counting estimates\n\n";
  os << "| d | beta | t | m | via P | via lambda_beta | exact log i_m | err P | err lambda |\n";
  os << "|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& l : docs) {
    if (l.doc.value("kind", "") != "count_estimate") continue;
    const int d = l.doc.at("d").get<int>();
    const std::string beta = l.doc.at("beta").get<std::string>();
    const int t = l.doc.at("t").get<int>();
    const auto m = l.doc.at("m").get<std::uint64_t>();
    const auto via_p = io::log_count_from(l.doc.at("via_P"));
    const auto via_l = io::log_count_from(l.doc.at("via_lambda"));
    PrecisionScope inner(50);
    std::string exact = "-", ep = "-", el = "-";
    if (auto it = oracles.find(d); it != oracles.end() && m < it->second.counts.size()) {
      const Real ex = log_of(it->second.counts[m]);
      exact = detail::short_num(ex);
      const Real errp = abs(Real(via_p.value) - ex), errl = abs(Real(via_l.value) - ex);
      ep = detail::short_num(errp);
      el = detail::short_num(errl);
      const std::string tag = "d" + std::to_string(d) + "_beta" + detail::file_safe(beta);
      plots["truncation_count_P_" + tag].emplace_back(std::to_string(t), ep);
      plots["truncation_count_lambda_" + tag].emplace_back(std::to_string(t), el);
    }
    os << "| " << d << " | " << beta << " | " << t << " | " << m << " | " << detail::short_num(via_p.value) << " | "
       << detail::short_num(via_l.value) << " | " << exact << " | " << ep << " | " << el << " |\n";
  }

  os << "\n## log Z estimates\n\n";
  os << "| d | lambda | t | asymptotic | exact | error |\n|---|---|---|---|---|---|\n";
  for (const auto& l : docs) {
    if (l.doc.value("kind", "") != "log_z") continue;
    const int d = l.doc.at("d").get<int>();
    const std::string lam = l.doc.at("lambda").get<std::string>();
    const int t = l.doc.at("t").get<int>();
    const auto est = io::log_count_from(l.doc.at("result"));
    PrecisionScope inner(50);
    std::string exact = "-", err = "-";
    if (auto it = oracles.find(d); it != oracles.end()) {
      const Real ex = log_of(it->second.partition_function(parse_rational(lam)));
      exact = detail::short_num(ex);
      err = detail::short_num(abs(Real(est.value) - ex));
      plots["truncation_logZ_d" + std::to_string(d) + "_lambda" + detail::file_safe(lam)].emplace_back(
          std::to_string(t), err);
    }
    os << "| " << d << " | " << lam << " | " << t << " | " << detail::short_num(est.value) << " | " << exact << " | "
       << err << " |\n";
  }

  os << "\n## Defect statistics\n\n";
  os << "| source | type | mean | se | m_T | z | var/mean | Poisson p |\n|---|---|---|---|---|---|---|---|\n";
  for (const auto& l : docs) {
    if (l.doc.value("kind", "") != "defect_summary") continue;
    const std::string src = std::filesystem::path(l.path).stem().string();
    for (const auto& t : l.doc.at("types")) {
      const std::string key = t.at("key").get<std::string>();
      auto opt = [&](const char* k) {
        if (!t.contains(k)) return std::string("-");
        std::ostringstream v;
        v << std::setprecision(6) << t.at(k).get<double>();
        return v.str();
      };
      std::string p = "-";
      if (t.contains("poisson_gof")) {
        std::ostringstream v;
        v << std::setprecision(4) << t.at("poisson_gof").at("p_value").get<double>();
        p = v.str();
        std::size_t i = 0;
        auto& obs = plots["gof_" + detail::file_safe(src) + "_" + detail::file_safe(key) + "_observed"];
        auto& exp = plots["gof_" + detail::file_safe(src) + "_" + detail::file_safe(key) + "_expected"];
        for (const auto& bin : t.at("poisson_gof").at("bins")) {
          std::ostringstream a, b;
          a << bin.at(0).get<double>();
          b << bin.at(1).get<double>();
          obs.emplace_back(std::to_string(i), a.str());
          exp.emplace_back(std::to_string(i), b.str());
          ++i;
        }
      }
      std::ostringstream mean, se;
      mean << std::setprecision(6) << t.at("moments").at("mean").get<double>();
      se << std::setprecision(3) << t.at("se").get<double>();
      os << "| " << src << " | " << key << " | " << mean.str() << " | " << se.str() << " | " << opt("m_T") << " | "
         << opt("z") << " | " << opt("var_mean_ratio") << " | " << p << " |\n";
    }
  }

  if (!plot_dir.empty()) {
    std::filesystem::create_directories(plot_dir);
    os << "\n## Plot data\n\n";
    for (auto& [name, rows] : plots) {
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return std::stod(a.first) < std::stod(b.first); });
      const auto path = std::filesystem::path(plot_dir) / (name + ".dat");
      detail::write_xy(path, rows);
      os << "- " << path.string() << "\n";
    }
  }
  return os.str();
}

// ---- dispatcher -----------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Independent sets in the hypercube: exact oracle, polymer and cluster expansion, "
               "asymptotic series, Glauber sampler."};
  app.name("hyperis");
  app.require_subcommand(1);
  app.fallthrough();
  Output o;
  app.add_option("--out", o.path, "write the result here instead of standard output");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact independent-set counts i_m(Q_d), d <= 5 (6 with --allow-d6)");
  int oracle_d = 0;
  bool allow_d6 = false;
  std::string oracle_lambda;
  unsigned oracle_threads = default_threads();
  oracle->add_option("--d", oracle_d, "dimension")->required();
  oracle->add_flag("--allow-d6", allow_d6, "permit the d = 6 enumeration");
  oracle->add_option("--lambda", oracle_lambda, "also report Z(λ) and E|I| exactly");
  oracle->add_option("--threads", oracle_threads, "worker threads");

  // polymers
  auto* polymers = app.add_subcommand("polymers", "defect-type census of odd polymers");
  int poly_d = 0, poly_size = 3;
  bool poly_symbolic = false;
  unsigned poly_threads = default_threads();
  std::uint64_t poly_budget = 200'000'000;
  polymers->add_option("--d", poly_d, "dimension (ignored with --symbolic)");
  polymers->add_option("--max-size", poly_size, "largest polymer size");
  polymers->add_flag("--symbolic", poly_symbolic, "census as polynomials in d");
  polymers->add_option("--threads", poly_threads, "worker threads");
  polymers->add_option("--budget", poly_budget, "enumeration node budget");

  // clusters
  auto* clusters = app.add_subcommand("clusters", "rooted cluster sums by polymer-size stratum");
  int cl_d = 0, cl_k = 2;
  std::vector<std::string> cl_obs{"one"};
  std::string cl_lambda;
  unsigned cl_threads = default_threads();
  std::uint64_t cl_budget = 200'000'000;
  clusters->add_option("--d", cl_d, "dimension")->required();
  clusters->add_option("--k", cl_k, "largest total cluster size");
  clusters->add_option("--observable", cl_obs, "one, size^p, nbhd^p, type_count(KEY)^p, mixed_size_nbhd");
  clusters->add_option("--lambda", cl_lambda, "also report truncated log Ξ and E|I| at this λ");
  clusters->add_option("--threads", cl_threads, "worker threads");
  clusters->add_option("--budget", cl_budget, "enumeration node budget");

  // rj / bj / pj
  auto* rj = app.add_subcommand("rj", "R_j(λ, d) polynomials");
  int rj_j = 3;
  AsymFlags rj_flags;
  rj->add_option("--j", rj_j, "compute R_1..R_j");
  rj_flags.attach(rj);

  auto* bj = app.add_subcommand("bj", "B_j(β, d) rational functions");
  int bj_r = 2;
  AsymFlags bj_flags;
  bj->add_option("--r", bj_r, "compute B_1..B_r");
  bj_flags.attach(bj);

  auto* pj = app.add_subcommand("pj", "P_j(β, d) for the fixed-size count");
  int pj_t = 3;
  std::optional<int> pj_r;
  AsymFlags pj_flags;
  pj->add_option("--t", pj_t, "truncation order (P_1..P_{t-1})")->required();
  pj->add_option("--r", pj_r, "number of B terms (default ceil(t/2) - 1)");
  pj_flags.attach(pj);

  // lambda-beta / count / count-structured / zeta
  std::string beta_s, lambda_s;
  int ad = 0, at = 2;
  unsigned digits = kDefaultDigits;
  AsymFlags a_flags;

  auto* lb = app.add_subcommand("lambda-beta", "fugacity λ_β targeting expected density β");
  lb->add_option("--beta", beta_s, "β as a fraction or decimal")->required();
  lb->add_option("--d", ad, "dimension")->required();
  lb->add_option("--t", at, "truncation order");
  a_flags.attach(lb);

  auto* count = app.add_subcommand("count", "log of the number of independent sets of size floor(βN)");
  count->add_option("--beta", beta_s, "β as a fraction or decimal")->required();
  count->add_option("--d", ad, "dimension")->required();
  count->add_option("--t", at, "truncation order");
  count->add_option("--digits", digits, "decimal precision");
  a_flags.attach(count);

  auto* cs = app.add_subcommand("count-structured", "log count with a prescribed defect structure");
  std::vector<std::string> fixed_s, diverging_s;
  cs->add_option("--beta", beta_s, "β as a fraction or decimal")->required();
  cs->add_option("--d", ad, "dimension")->required();
  cs->add_option("--t", at, "truncation order");
  cs->add_option("--digits", digits, "decimal precision");
  cs->add_option("--fixed", fixed_s, "KEY=k: exactly k defects of type KEY");
  cs->add_option("--diverging", diverging_s, "KEY=s or KEY=s,m: m_T + s defects of type KEY (m_T given or from census)");
  a_flags.attach(cs);

  auto* zeta = app.add_subcommand("zeta", "asymptotic log Z(λ) of the hard-core model on Q_d");
  zeta->add_option("--lambda", lambda_s, "λ as a fraction or decimal")->required();
  zeta->add_option("--d", ad, "dimension")->required();
  zeta->add_option("--t", at, "truncation order");
  zeta->add_option("--digits", digits, "decimal precision");
  a_flags.attach(zeta);

  // sample
  auto* sample = app.add_subcommand("sample", "Glauber sampler with defect statistics");
  mc::RunConfig scfg;
  std::string s_lambda = "1", s_start = "even", s_csv;
  std::size_t s_samples = 2000, s_chains = 1;
  std::optional<std::uint64_t> s_burn, s_thin;
  unsigned s_threads = default_threads();
  int s_census = 2;
  bool s_diag = false;
  sample->add_option("--d", scfg.d, "dimension")->required();
  sample->add_option("--lambda", s_lambda, "fugacity");
  sample->add_option("--samples", s_samples, "snapshots per chain");
  sample->add_option("--burn-in", s_burn, "burn-in steps (default 10·2^d·d)");
  sample->add_option("--thin", s_thin, "steps between snapshots (default 2^d)");
  sample->add_option("--seed", scfg.seed, "RNG seed");
  sample->add_option("--chains", s_chains, "independent chains");
  sample->add_option("--threads", s_threads, "worker threads");
  sample->add_option("--start", s_start, "even, odd or empty");
  sample->add_flag("--verify", scfg.verify, "check every snapshot");
  sample->add_option("--csv", s_csv, "per-snapshot CSV log");
  sample->add_option("--census-size", s_census, "largest defect size with census means");
  sample->add_flag("--diagnostic", s_diag, "add the two-chain convergence diagnostic");

  // validate
  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  validation::AcceptanceOptions vopt;
  vopt.threads = default_threads();
  std::vector<int> only;
  validate->add_option("--only", only, "criterion ids to run");
  validate->add_option("--threads", vopt.threads, "worker threads");
  validate->add_option("--seed", vopt.seed, "sampler seed");
  validate->add_option("--d9-samples", vopt.d9_samples, "samples at d = 9");

  // report
  auto* report = app.add_subcommand("report", "merge JSON outputs into a comparison table and plot data");
  std::vector<std::string> inputs;
  std::string plot_dir;
  report->add_option("inputs", inputs, "JSON files produced by other subcommands")->required();
  report->add_option("--plot-dir", plot_dir, "directory for x-y plot data files");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << error_line("usage", kPrecondition, e.what()) << "\n";
    return kPrecondition;
  }

  try {
    if (oracle->parsed()) {
      const auto prof = size_profile(Dim(oracle_d), allow_d6, std::max(1u, oracle_threads));
      json doc = io::to_json(prof);
      if (!oracle_lambda.empty()) {
        const Rat lam = parse_rational(oracle_lambda);
        require(lam > 0, "λ must be positive");
        PrecisionScope ps(kDefaultDigits);
        doc["lambda"] = io::to_json(lam);
        doc["partition_function"] = io::to_json(prof.partition_function(lam));
        doc["log_partition_function"] = format_real(log_of(prof.partition_function(lam)), 30);
        doc["mean_size"] = io::to_json(prof.mean_size(lam));
      }
      emit(doc, o, out);
    } else if (polymers->parsed()) {
      if (poly_symbolic) {
        emit(io::to_json(symbolic_census(poly_size, std::max(1u, poly_threads), poly_budget)), o, out);
      } else {
        require(poly_d >= 1, "--d is required without --symbolic");
        emit(io::to_json(census(Dim(poly_d), poly_size, std::max(1u, poly_threads), Budget(poly_budget))), o, out);
      }
    } else if (clusters->parsed()) {
      std::vector<Observable> obs;
      for (const auto& s : cl_obs) obs.push_back(Observable::parse(s));
      const auto sums = cluster_sums(Dim(cl_d), cl_k, obs, std::max(1u, cl_threads), Budget(cl_budget));
      json arr = json::array();
      for (const auto& s : sums) arr.push_back(io::to_json(s));
      json doc = with_header("cluster_sums", {{"d", cl_d}, {"k", cl_k}, {"sums", arr}});
      if (!cl_lambda.empty()) {
        const Rat lam = parse_rational(cl_lambda);
        require(lam > 0, "λ must be positive");
        PrecisionScope ps(kDefaultDigits);
        const Rat lx = truncated_log_xi(Dim(cl_d), lam, cl_k, std::max(1u, cl_threads));
        const Rat es = expected_size_truncated(Dim(cl_d), lam, cl_k, std::max(1u, cl_threads));
        doc["lambda"] = io::to_json(lam);
        doc["log_xi_truncated"] = io::to_json(lx);
        doc["log_xi_truncated_decimal"] = format_real(to_real(lx), 30);
        doc["expected_size_truncated"] = io::to_json(es);
        doc["expected_size_truncated_decimal"] = format_real(to_real(es), 30);
      }
      emit(doc, o, out);
    } else if (rj->parsed()) {
      require(rj_j >= 1, "--j must be >= 1");
      require(rj_j <= asym::kGuaranteedR || rj_flags.allow_beyond,
              "R_j beyond j = 3 is best-effort; pass --allow-beyond-guaranteed");
      json rows = json::array();
      for (int j = 1; j <= rj_j; ++j)
        rows.push_back({{"j", j}, {"name", "R" + std::to_string(j)}, {"poly", io::to_json(asym::R_poly(j, rj_flags.options()))}});
      emit(with_header("r_table", {{"rows", rows}}), o, out);
    } else if (bj->parsed()) {
      require(bj_r >= 1, "--r must be >= 1");
      emit(with_header("b_table", {{"rows", io::ratfunc_list(asym::compute_B(bj_r, bj_flags.options()), "B")}}), o, out);
    } else if (pj->parsed()) {
      emit(io::to_json(asym::compute_P(pj_t, pj_flags.options(), pj_r)), o, out);
    } else if (lb->parsed()) {
      const Rat beta = parse_rational(beta_s);
      const auto r = asym::lambda_beta(beta, Dim(ad), at, a_flags.options());
      json bs = json::array();
      for (std::size_t j = 0; j < r.B.size(); ++j) bs.push_back({{"j", j + 1}, {"value", io::to_json(r.B[j])}});
      PrecisionScope ps(kDefaultDigits);
      emit(with_header("lambda_beta", {{"beta", io::to_json(beta)}, {"d", ad}, {"t", at},
                                        {"value", io::to_json(r.value)},
                                        {"decimal", format_real(to_real(r.value), 30)},
                                        {"B", bs}, {"warnings", r.warnings}}),
           o, out);
    } else if (count->parsed()) {
      const Rat beta = parse_rational(beta_s);
      const auto c = asym::log_count_asymptotic(beta, Dim(ad), at, digits, a_flags.options());
      emit(with_header("count_estimate", {{"beta", io::to_json(beta)}, {"d", ad}, {"t", at}, {"m", c.m},
                                           {"lambda_beta", io::to_json(c.lambda_beta)},
                                           {"via_P", log_count_json(c.via_P)},
                                           {"via_lambda", log_count_json(c.via_lambda)}}),
           o, out);
    } else if (cs->parsed()) {
      const Rat beta = parse_rational(beta_s);
      std::map<std::string, unsigned> fixed;
      std::map<std::string, asym::DivergingType> diverging;
      auto split = [](const std::string& s) {
        const auto eq = s.rfind('=');
        require(eq != std::string::npos && eq > 0 && eq + 1 < s.size(), "expected KEY=VALUE, got '" + s + "'");
        return std::make_pair(s.substr(0, eq), s.substr(eq + 1));
      };
      for (const auto& s : fixed_s) {
        auto [k, v] = split(s);
        const BigInt n = parse_bigint(v);
        require(n >= 0 && n <= 1000, "fixed defect count must be in 0..1000");
        fixed[k] = n.convert_to<unsigned>();
      }
      for (const auto& s : diverging_s) {
        auto [k, v] = split(s);
        asym::DivergingType dt;
        if (auto comma = v.find(','); comma != std::string::npos) {
          dt.offset = parse_rational(v.substr(0, comma));
          dt.mean = parse_rational(v.substr(comma + 1));
        } else {
          dt.offset = parse_rational(v);
        }
        diverging[k] = dt;
      }
      const auto r = asym::structured_count(beta, Dim(ad), at, fixed, diverging, digits, a_flags.options());
      json fx = json::object(), dv = json::object();
      for (const auto& [k, v] : fixed) fx[k] = v;
      for (const auto& [k, v] : diverging) {
        dv[k] = {{"offset", io::to_json(v.offset)}};
        if (v.mean) dv[k]["mean"] = io::to_json(*v.mean);
      }
      emit(with_header("structured_count", {{"beta", io::to_json(beta)}, {"d", ad}, {"t", at}, {"fixed", fx},
                                             {"diverging", dv}, {"result", log_count_json(r)}}),
           o, out);
    } else if (zeta->parsed()) {
      const Rat lam = parse_rational(lambda_s);
      const auto r = asym::log_Z_asymptotic(lam, Dim(ad), at, digits, a_flags.options());
      emit(with_header("log_z", {{"lambda", io::to_json(lam)}, {"d", ad}, {"t", at}, {"result", log_count_json(r)}}),
           o, out);
    } else if (sample->parsed()) {
      require(scfg.d >= 2 && scfg.d <= mc::kMaxSamplerDim, "sampler needs 2 <= d <= 20");
      require(s_samples >= 20, "--samples must be >= 20");
      require(s_chains >= 1, "--chains must be >= 1");
      scfg.lambda = parse_rational(s_lambda);
      require(scfg.lambda > 0, "λ must be positive");
      if (s_start == "even") scfg.start = mc::Start::all_even;
      else if (s_start == "odd") scfg.start = mc::Start::all_odd;
      else if (s_start == "empty") scfg.start = mc::Start::empty;
      else throw PreconditionError("--start must be even, odd or empty");
      scfg.burn_in = s_burn.value_or(mc::default_burn_in(scfg.d));
      scfg.thin = s_thin.value_or(std::uint64_t{1} << scfg.d);
      require(scfg.thin >= 1, "--thin must be >= 1");
      scfg.steps = scfg.burn_in + scfg.thin * s_samples;
      const auto chains = mc::sample_chains(scfg, s_chains, std::max(1u, s_threads));
      std::vector<mc::DefectReport> all;
      for (const auto& c : chains) all.insert(all.end(), c.begin(), c.end());
      const Census cen = census(Dim(scfg.d), s_census, std::max(1u, s_threads));
      json doc = io::to_json(mc::defect_statistics(all, cen, scfg.lambda));
      doc["config"] = {{"d", scfg.d}, {"lambda", io::to_json(scfg.lambda)}, {"burn_in", scfg.burn_in},
                       {"thin", scfg.thin}, {"steps", scfg.steps}, {"seed", scfg.seed}, {"chains", s_chains},
                       {"start", s_start}, {"census_size", s_census}};
      if (s_diag) {
        const auto dg = mc::convergence_diagnostic(scfg);
        doc["diagnostic"] = {{"mean_from_even", dg.mean_from_even}, {"mean_from_odd", dg.mean_from_odd},
                             {"gap_in_se", dg.gap_in_se}};
      }
      if (!s_csv.empty()) {
        std::ofstream f(s_csv);
        require(static_cast<bool>(f), "cannot open CSV file '" + s_csv + "'");
        mc::write_csv(f, all);
      }
      emit(doc, o, out);
    } else if (validate->parsed()) {
      for (int id : only) require(id >= 1 && id <= 11, "criterion ids are 1..11");
      const auto results = validation::run_acceptance(vopt, only);
      bool ok = true;
      json arr = json::array();
      for (const auto& r : results) {
        out << validation::summary_line(r) << "\n";
        ok = ok && r.passed;
        arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
      }
      if (!o.path.empty()) emit(with_header("acceptance", {{"criteria", arr}, {"passed", ok}}), o, out);
      return ok ? kOk : kValidationFailed;
    } else if (report->parsed()) {
      std::vector<detail::Loaded> docs;
      for (const auto& p : inputs) {
        std::ifstream f(p);
        require(static_cast<bool>(f), "cannot open input '" + p + "'");
        json j;
        try {
          f >> j;
        } catch (const json::exception& e) {
          throw PreconditionError("input '" + p + "' is not valid JSON");
        }
        require(j.is_object() && j.contains("kind"), "input '" + p + "' has no \"kind\" field");
        docs.push_back({p, std::move(j)});
      }
      const std::string text = build_report(docs, plot_dir);
      if (o.path.empty()) {
        out << text;
      } else {
        std::ofstream f(o.path);
        require(static_cast<bool>(f), "cannot open output file '" + o.path + "'");
        f << text;
      }
    }
  } catch (const BudgetExceeded& e) {
    err << error_line("budget", kBudget, e.what()) << "\n";
    return kBudget;
  } catch (const PreconditionError& e) {
    err << error_line("precondition", kPrecondition, e.what()) << "\n";
    return kPrecondition;
  } catch (const json::exception& e) {
    err << error_line("precondition", kPrecondition, std::string("malformed input document: ") + e.what()) << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << error_line("internal", kInternal, e.what()) << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace hyperis::cli
