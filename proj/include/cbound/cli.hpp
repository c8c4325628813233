#pragma once

// Command-line front end: argument parsing, dispatch, JSON/CSV emission.
// Everything lives in this header so that tests can drive the exact code
// path of the executable and inspect its output in-process.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbound/bounds.hpp"
#include "cbound/cluster.hpp"
#include "cbound/graphs.hpp"
#include "cbound/mayer.hpp"
#include "cbound/potentials.hpp"

namespace cbound::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

enum ExitCode : int { kOk = 0, kArgumentError = 2, kVerificationFailed = 3 };

using Json = nlohmann::ordered_json;

/// Raised for malformed input; maps to exit status 2.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Potential specs: `kind:key=value,...`

namespace detail {

inline double parse_double(std::string_view key, std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw ArgumentError("invalid value '" + s + "' for key '" + std::string(key) + "'");
  return v;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Parses e.g. `hardcore:sigma=1,d=3`, `hardrod:sigma=1`,
/// `squarewell:sigma=1,epsilon=1,width=0.5,d=1`.
/// Defaults: sigma = 1; d = 3 for hardcore and squarewell, 1 for hardrod.
inline PairPotential parse_potential(std::string_view spec) {
  const std::string text = detail::trim(spec);
  if (text.empty()) throw ArgumentError("empty potential spec");
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  PairPotential p;
  if (kind == "hardcore") {
    p = {PotentialKind::HardCore, 1.0, 0.0, 0.0, 3};
  } else if (kind == "hardrod") {
    p = {PotentialKind::HardRod, 1.0, 0.0, 0.0, 1};
  } else if (kind == "squarewell") {
    p = {PotentialKind::SquareWell, 1.0, 0.0, 0.0, 3};
  } else {
    throw ArgumentError("unknown potential kind '" + kind + "'");
  }
  bool have_eps = false;
  bool have_width = false;
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string token;
    while (std::getline(rest, token, ',')) {
      token = detail::trim(token);
      const auto eq = token.find('=');
      if (token.empty() || eq == std::string::npos || eq == 0)
        throw ArgumentError("malformed token '" + token + "' (expected key=value)");
      const std::string key = token.substr(0, eq);
      const std::string val = token.substr(eq + 1);
      if (key == "sigma") {
        p.sigma = detail::parse_double(key, val);
      } else if (key == "d") {
        const double d = detail::parse_double(key, val);
        if (d != std::floor(d) || d < 1 || d > 64)
          throw ArgumentError("invalid value '" + val + "' for key 'd'");
        p.dimension = static_cast<int>(d);
      } else if (key == "epsilon" && p.kind == PotentialKind::SquareWell) {
        p.epsilon = detail::parse_double(key, val);
        have_eps = true;
      } else if (key == "width" && p.kind == PotentialKind::SquareWell) {
        p.well_width = detail::parse_double(key, val);
        have_width = true;
      } else {
        throw ArgumentError("unknown key '" + key + "' for potential '" + kind + "'");
      }
    }
  }
  if (p.kind == PotentialKind::SquareWell && (!have_eps || !have_width))
    throw ArgumentError("squarewell requires epsilon and width");
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ArgumentError(e.what());
  }
  return p;
}

inline std::string format_potential(const PairPotential& p) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(p.kind) << ":sigma=" << p.sigma;
  if (p.kind == PotentialKind::SquareWell)
    os << ",epsilon=" << p.epsilon << ",width=" << p.well_width;
  os << ",d=" << p.dimension;
  return os.str();
}

/// 17 significant digits, round-trip exact.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Configuration

enum class Command {
  Radius,
  KStar,
  Curves,
  GraphsCount,
  Mayer,
  FreeEnergy,
  VerifyPolymer,
  VerifyIdentities
};

struct RunConfig {
  Command command = Command::KStar;
  std::string potential_spec;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::string> output_path;
  unsigned threads = 1;

  // radius
  double beta = 1.0;
  double stab = 0.0;
  double c_beta = 0.0;
  std::string K_text = "auto";
  double K_max = 4.0;
  // kstar / curves
  double tol = 1e-4;
  double u_min = 0.0;
  double u_max = 0.0;
  int points = 0;
  // graphs count
  int n = 0;
  std::string graph_class = "connected";
  // mayer / free-energy
  int m = 1;
  std::uint64_t samples = 1'000'000;
  std::optional<double> box;
  double rho = 0.0;
  int order = 1;
  // verify-polymer
  double L = 10.0;
  double K = 1.0;
  int N = 2;
  int n_max = 4;
  int grid = 256;
};

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Radius: return "radius";
    case Command::KStar: return "kstar";
    case Command::Curves: return "curves";
    case Command::GraphsCount: return "graphs count";
    case Command::Mayer: return "mayer";
    case Command::FreeEnergy: return "free-energy";
    case Command::VerifyPolymer: return "verify-polymer";
    case Command::VerifyIdentities: return "verify-identities";
  }
  return "?";
}

namespace detail {

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = kOk;
};

inline std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ArgumentError("invalid seed '" + s + "'");
  return v;
}

inline ParseOutcome parse_args(const std::vector<std::string>& args, std::ostream& out,
                               std::ostream& err) {
  RunConfig cfg;
  std::string seed_text;
  std::string out_path;

  CLI::App app{"Convergence bounds and Mayer coefficients for the canonical cluster expansion",
               "cbound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write output to this file instead of stdout");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_text, "64-bit seed (default 0x5EED)");
    sub->add_option("--threads", cfg.threads, "worker threads (does not change results)")
        ->check(CLI::Range(1u, 256u));
  };

  auto* radius = app.add_subcommand("radius", "convergence radius report (JSON)");
  radius->add_option("--beta", cfg.beta, "inverse temperature")->required();
  radius->add_option("--stab", cfg.stab, "stability constant B")->required();
  radius->add_option("--cbeta", cfg.c_beta, "temperedness integral C(beta)")->required();
  radius->add_option("--K", cfg.K_text, "normalisation constant, or 'auto'");
  radius->add_option("--kmax", cfg.K_max, "upper end of the K scan for --K auto");
  add_out(radius);

  auto* kstar = app.add_subcommand("kstar", "largest K admissible for all beta, B");
  kstar->add_option("--tol", cfg.tol, "bisection width");
  add_out(kstar);

  auto* curves = app.add_subcommand("curves", "u, F, a*, g(a*) table (CSV)");
  curves->add_option("--u-min", cfg.u_min, "first u (> 0)")->required();
  curves->add_option("--u-max", cfg.u_max, "last u")->required();
  curves->add_option("--points", cfg.points, "number of evenly spaced rows")->required();
  add_out(curves);

  auto* graphs = app.add_subcommand("graphs", "labeled graph enumeration");
  graphs->require_subcommand(1);
  auto* count = graphs->add_subcommand("count", "count connected or 2-connected graphs");
  count->add_option("--n", cfg.n, "number of vertices")->required();
  count->add_option("--class", cfg.graph_class, "connected (default) or biconnected")
      ->check(CLI::IsMember({"connected", "biconnected"}));
  add_out(count);

  auto* mayer = app.add_subcommand("mayer", "Monte Carlo irreducible Mayer coefficient");
  mayer->add_option("--potential", cfg.potential_spec, "kind[:key=value,...]")->required();
  mayer->add_option("--beta", cfg.beta, "inverse temperature")->required();
  mayer->add_option("--m", cfg.m, "coefficient order, 1..4")->required();
  mayer->add_option("--samples", cfg.samples, "Monte Carlo samples");
  mayer->add_option("--box", cfg.box, "periodic box side: estimate the finite-volume activity");
  add_seed(mayer);
  add_out(mayer);

  auto* fe = app.add_subcommand("free-energy", "truncated density series of the free energy");
  fe->add_option("--potential", cfg.potential_spec, "kind[:key=value,...]")->required();
  fe->add_option("--beta", cfg.beta, "inverse temperature")->required();
  fe->add_option("--rho", cfg.rho, "density")->required();
  fe->add_option("--order", cfg.order, "highest coefficient order (at most 4)")->required();
  fe->add_option("--samples", cfg.samples, "Monte Carlo samples per coefficient");
  add_seed(fe);
  add_out(fe);

  auto* vp = app.add_subcommand("verify-polymer", "polymer-expansion identities for a 1-D potential");
  vp->add_option("--potential", cfg.potential_spec, "1-D potential spec")->required();
  vp->add_option("--beta", cfg.beta, "inverse temperature")->required();
  vp->add_option("--L", cfg.L, "ring length")->required();
  vp->add_option("--K", cfg.K, "normalisation constant, >= 1")->required();
  vp->add_option("--N", cfg.N, "particle number, 1..4")->required();
  vp->add_option("--nmax", cfg.n_max, "cluster-log orders to check");
  vp->add_option("--grid", cfg.grid, "lattice points on the ring (power of two)");
  add_out(vp);

  auto* vi = app.add_subcommand("verify-identities", "combinatorial identity suite");
  add_out(vi);

  std::vector<const char*> argv;
  argv.push_back("cbound");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return {std::nullopt, app.exit(e, out, err)};
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return {std::nullopt, kArgumentError};
  }

  if (radius->parsed()) cfg.command = Command::Radius;
  if (kstar->parsed()) cfg.command = Command::KStar;
  if (curves->parsed()) cfg.command = Command::Curves;
  if (count->parsed()) cfg.command = Command::GraphsCount;
  if (mayer->parsed()) cfg.command = Command::Mayer;
  if (fe->parsed()) cfg.command = Command::FreeEnergy;
  if (vp->parsed()) cfg.command = Command::VerifyPolymer;
  if (vi->parsed()) cfg.command = Command::VerifyIdentities;
  if (!seed_text.empty()) cfg.seed = parse_seed(seed_text);
  if (!out_path.empty()) cfg.output_path = out_path;
  return {cfg, kOk};
}

// ---------------------------------------------------------------------------
// Reports

inline Json envelope(const RunConfig& cfg, Json resolved) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command_name(cfg.command);
  j["resolved_config"] = std::move(resolved);
  j["seed"] = cfg.seed;
  return j;
}

inline double resolve_K(const RunConfig& cfg) {
  if (cfg.K_text == "auto") return 0.0;
  std::size_t used = 0;
  double K = 0.0;
  try {
    K = std::stod(cfg.K_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cfg.K_text.size())
    throw ArgumentError("--K expects 'auto' or a number, got '" + cfg.K_text + "'");
  if (!(K >= 1.0)) throw ArgumentError("K must be >= 1");
  return K;
}

inline std::string run_radius(const RunConfig& cfg) {
  ThermoParams{cfg.beta, cfg.stab, cfg.c_beta}.validate();
  if (!(cfg.c_beta > 0.0)) throw ArgumentError("C_beta must be positive");
  const double K = resolve_K(cfg);
  const BoundsReport r = K == 0.0 ? optimize_K(cfg.beta, cfg.stab, cfg.c_beta, cfg.K_max)
                                  : bounds_report(cfg.beta, cfg.stab, cfg.c_beta, K);
  Json resolved = {{"beta", cfg.beta},   {"stab", cfg.stab}, {"cbeta", cfg.c_beta},
                   {"K", cfg.K_text},    {"kmax", cfg.K_max}};
  Json j = envelope(cfg, std::move(resolved));
  j["beta"] = r.beta;
  j["stab"] = r.B;
  j["c_beta"] = r.C_beta;
  j["K"] = r.K;
  j["u"] = r.u;
  j["F"] = r.F_u;
  j["a_star"] = r.a_star;
  j["g_a_star"] = r.g_of_a_star;
  j["feasible"] = r.feasible;
  j["rho_star"] = r.rho_star;
  j["rho_star_1"] = r.rho_star_1;
  j["ratio"] = r.rho_star / r.rho_star_1;
  return j.dump(2) + "\n";
}

inline std::string run_kstar(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ArgumentError("tol must be positive");
  const double k = find_K_star(cfg.tol);
  // four decimals, truncated
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", std::floor(k * 1e4) / 1e4);
  return std::string(buf) + "\n";
}

inline std::string run_curves(const RunConfig& cfg) {
  if (!(cfg.u_min > 0.0)) throw ArgumentError("u-min must be positive");
  if (cfg.points < 1) throw ArgumentError("points must be >= 1");
  const auto grid = linear_grid(cfg.u_min, cfg.u_max, cfg.points);
  std::string s = "u,F,a_star,g_a_star\n";
  for (const CurveRow& r : emit_curves(grid)) {
    s += format_number(r.u) + "," + format_number(r.F) + "," + format_number(r.a_star) + "," +
         format_number(r.g_a_star) + "\n";
  }
  return s;
}

inline std::string run_graphs_count(const RunConfig& cfg) {
  const std::uint64_t c =
      cfg.graph_class == "biconnected" ? count_biconnected(cfg.n) : count_connected(cfg.n);
  return std::to_string(c) + "\n";
}

inline MonteCarloOptions mc_options(const RunConfig& cfg) {
  MonteCarloOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.shards = cfg.threads;
  return opt;
}

inline std::string run_mayer(const RunConfig& cfg) {
  const PairPotential p = parse_potential(cfg.potential_spec);
  Json resolved = {{"potential", format_potential(p)},
                   {"beta", cfg.beta},
                   {"m", cfg.m},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed}};
  if (cfg.box) resolved["box"] = *cfg.box;
  MayerEstimate est;
  std::optional<FiniteVolumeEstimate> fv;
  if (cfg.box) {
    fv = w_star_finite_volume(p, cfg.beta, cfg.m, *cfg.box, mc_options(cfg));
    est = fv->estimate;
  } else {
    est = beta_m_monte_carlo(p, cfg.beta, cfg.m, mc_options(cfg));
  }
  Json j = envelope(cfg, std::move(resolved));
  j["m"] = est.m;
  j["mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["samples"] = est.samples;
  if (fv) {
    j["box"] = fv->box;
    j["box_too_small"] = fv->box_too_small;
  }
  return j.dump(2) + "\n";
}

inline std::string run_free_energy(const RunConfig& cfg) {
  const PairPotential p = parse_potential(cfg.potential_spec);
  if (cfg.order < 0 || cfg.order > kMaxMayerOrder)
    throw ArgumentError("order must be in [0, " + std::to_string(kMaxMayerOrder) + "]");
  if (!(cfg.rho > 0.0)) throw ArgumentError("rho must be positive");
  Json resolved = {{"potential", format_potential(p)}, {"beta", cfg.beta},
                   {"rho", cfg.rho},                  {"order", cfg.order},
                   {"samples", cfg.samples},          {"seed", cfg.seed}};
  std::vector<double> coeffs;
  Json coeff_json = Json::array();
  for (int m = 1; m <= cfg.order; ++m) {
    const MayerEstimate e = beta_m_monte_carlo(p, cfg.beta, m, mc_options(cfg));
    coeffs.push_back(e.mean);
    coeff_json.push_back({{"m", m}, {"mean", e.mean}, {"std_error", e.std_error}});
  }
  const double f_series = free_energy_series(cfg.rho, cfg.beta, coeffs, cfg.order);
  Json j = envelope(cfg, std::move(resolved));
  j["rho"] = cfg.rho;
  j["f_series"] = f_series;
  j["f_ideal"] = ideal_free_energy(cfg.rho, cfg.beta);
  j["coefficients"] = std::move(coeff_json);
  if (p.kind == PotentialKind::HardRod) {
    const double oracle = tonks_free_energy(cfg.rho, cfg.beta, p.sigma);
    j["oracle"] = oracle;
    j["abs_diff"] = std::abs(f_series - oracle);
  }
  return j.dump(2) + "\n";
}

struct IdentityRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline Json rows_to_json(const std::vector<IdentityRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back({{"name", r.name},
                 {"lhs", r.lhs},
                 {"rhs", r.rhs},
                 {"residual", r.residual},
                 {"tolerance", r.tolerance},
                 {"pass", r.pass}});
  }
  return a;
}

inline IdentityRow make_row(std::string name, double lhs, double rhs, double tol) {
  const double res = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
  return {std::move(name), lhs, rhs, res, tol, res < tol};
}

inline std::pair<std::string, bool> run_verify_polymer(const RunConfig& cfg) {
  const PairPotential p = parse_potential(cfg.potential_spec);
  if (p.dimension != 1) throw ArgumentError("verify-polymer needs a 1-D potential");
  if (cfg.N < 1 || cfg.N > 4) throw ArgumentError("N must be in [1, 4]");
  if (cfg.n_max < 1 || cfg.n_max > kMaxClusterOrder) throw ArgumentError("nmax must be in [1, 6]");
  Json resolved = {{"potential", format_potential(p)}, {"beta", cfg.beta}, {"L", cfg.L},
                   {"K", cfg.K}, {"N", cfg.N}, {"nmax", cfg.n_max}, {"grid", cfg.grid}};

  const PotentialActivities act = zeta_from_potential(p, cfg.beta, cfg.L, cfg.K, cfg.N, cfg.grid);
  std::vector<IdentityRow> rows;

  const double z_coll = polymer_partition(act.table);
  const double z_part = polymer_partition_by_partitions(act.table);
  rows.push_back(make_row("partition_forms", z_part, z_coll, 1e-12));

  // exp(truncated cluster log) against Z_int, order by order
  const auto orders = cluster_log_orders(act.table, cfg.n_max);
  Json per_order = Json::array();
  double partial = 0.0;
  double prev_res = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    partial += orders[k];
    const double res = std::abs(std::exp(partial) - z_coll) / std::abs(z_coll);
    per_order.push_back({{"n_max", k + 1}, {"residual", res}});
    if (res > prev_res + 1e-14) monotone = false;
    prev_res = res;
  }
  IdentityRow cl = make_row("cluster_log", std::exp(partial), z_coll, 0.0);
  cl.tolerance = prev_res;
  cl.pass = monotone;
  rows.push_back(cl);

  if (cfg.N <= 3) {
    const DirectZCheck z = direct_Z_small(p, cfg.beta, cfg.L, cfg.K, cfg.N, cfg.grid);
    IdentityRow r{"factorization", z.z_direct, z.z_free * z.z_int, z.residual, 1e-6,
                  z.residual < 1e-6};
    rows.push_back(r);
  }

  // tree-graph activity bound: density <= rho* must imply the KP condition
  const double B = stability_constant(p);
  const double C = temperedness_integral(p, cfg.beta);
  const double a = maximize_F(std::exp(-cfg.beta * B) * cfg.K).a_star;
  std::vector<double> bounds(cfg.N, 0.0);
  for (int n = 2; n <= cfg.N; ++n)
    bounds[n - 1] = zeta_tree_bound(n, cfg.beta, B, C, cfg.L, cfg.K, a) * std::exp(-a * n);
  const KPCheck kp = kp_check(bounds, a, cfg.K);
  const double density = cfg.N / cfg.L;
  const double rstar = rho_star(cfg.beta, B, C, cfg.K);
  rows.push_back({"kp_implied_by_rho_star", density, rstar, 0.0, 0.0,
                  density > rstar || kp.passes});

  bool all = true;
  for (const auto& r : rows) all = all && r.pass;
  Json j = envelope(cfg, std::move(resolved));
  j["zeta_by_size"] = act.by_size;
  j["quadrature_halving_delta"] = act.halving_delta;
  j["identities"] = rows_to_json(rows);
  j["cluster_log_residuals"] = std::move(per_order);
  j["kp"] = {{"a", a},
             {"multi_lhs", kp.multi_lhs},
             {"multi_rhs", kp.multi_rhs},
             {"singleton_lhs", kp.singleton_lhs},
             {"singleton_rhs", kp.singleton_rhs},
             {"passes", kp.passes}};
  j["all_pass"] = all;
  return {j.dump(2) + "\n", all};
}

inline std::pair<std::string, bool> run_verify_identities(const RunConfig& cfg) {
  constexpr double kTol = 1e-9;
  std::vector<IdentityRow> rows;
  for (int n = 2; n <= 6; ++n) {
    double expected = 1.0;
    for (int k = 2; k < n; ++k) expected *= k;
    if ((n - 1) % 2 == 1) expected = -expected;
    const auto complete = LabeledGraph::complete(n).edges();
    rows.push_back(make_row("penrose_n" + std::to_string(n),
                            static_cast<double>(penrose_value(n, complete)), expected, kTol));
  }
  for (int n = 0; n <= 6; ++n) {
    for (double K : {1.01, 1.1462, 1.5, 2.0, 3.0}) {
      const IdentityValues v = step1_identity(n, K);
      IdentityRow r = make_row("step1_n" + std::to_string(n) + "_K" + format_number(K), v.lhs,
                               v.rhs, kTol);
      r.residual = std::abs(v.lhs - v.rhs) / v.rhs;
      r.pass = r.residual < kTol;
      rows.push_back(r);
    }
  }
  for (double K : {1.0, 1.1, 1.1462, 1.3, 1.5}) {
    rows.push_back(make_row("free_case_log_K" + format_number(K), free_case_log_sum(K, 40),
                            -std::log(K), kTol));
  }
  bool all = true;
  for (const auto& r : rows) all = all && r.pass;
  Json j = envelope(cfg, Json::object());
  j["identities"] = rows_to_json(rows);
  j["all_pass"] = all;
  return {j.dump(2) + "\n", all};
}

}  // namespace detail

/// Executes a parsed configuration, writing the report to `out` (or to
/// config.output_path). Returns the process exit status.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string report;
  bool verified = true;
  try {
    switch (cfg.command) {
      case Command::Radius: report = detail::run_radius(cfg); break;
      case Command::KStar: report = detail::run_kstar(cfg); break;
      case Command::Curves: report = detail::run_curves(cfg); break;
      case Command::GraphsCount: report = detail::run_graphs_count(cfg); break;
      case Command::Mayer: report = detail::run_mayer(cfg); break;
      case Command::FreeEnergy: report = detail::run_free_energy(cfg); break;
      case Command::VerifyPolymer:
        std::tie(report, verified) = detail::run_verify_polymer(cfg);
        break;
      case Command::VerifyIdentities:
        std::tie(report, verified) = detail::run_verify_identities(cfg);
        break;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kArgumentError;
  }
  if (cfg.output_path) {
    std::ofstream f(*cfg.output_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open '" << *cfg.output_path << "' for writing\n";
      return kArgumentError;
    }
    f << report;
  } else {
    out << report;
  }
  return verified ? kOk : kVerificationFailed;
}

/// Full entry point: parse then run.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  detail::ParseOutcome parsed;
  try {
    parsed = detail::parse_args(args, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kArgumentError;
  }
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, out, err);
}

}  // namespace cbound::cli
