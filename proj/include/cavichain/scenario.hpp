// Copyright 2026 The cavichain authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CAVICHAIN_SCENARIO_HPP
#define CAVICHAIN_SCENARIO_HPP

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "cavichain/identities.hpp"
#include "cavichain/oracle_check.hpp"
#include "cavichain/table.hpp"

// Config-driven scenario runner behind the command-line tool. One JSON config
// drives every subcommand; all numeric output is deterministic for a fixed
// config and seed.

namespace cavichain {

/// Parsed scenario configuration. Key layout:
///   params: E, epsilon, eta, tau, sigma_minus, sigma_plus
///   states: rho0, rho1 (kind = gibbs | vacuum | displaced_gibbs, beta, mean_re/im)
///   run:    N, n, m, pair_kind, t_grid [start, stop, count],
///           theta_radii [start, stop, count], theta_angles, theta_probe_re/im,
///           cutoff, cutoffs, dt, tol, seed, sets, two_step_sets, sweep_sets,
///           instances, k_max
///   output: directory, formats
class ScenarioConfig {
 public:
  static ScenarioConfig defaults() {
    ScenarioConfig c;
    c.tree_ = ordered_json::parse(R"({
      "params": {"E": 1.0, "epsilon": 1.0, "eta": 0.5, "tau": 1.0,
                 "sigma_minus": 0.2, "sigma_plus": 0.05},
      "states": {"rho0": {"kind": "gibbs", "beta": 2.0},
                 "rho1": {"kind": "gibbs", "beta": 1.0}},
      "run": {"N": 12, "n": 2, "m": 1, "pair_kind": "cavity_chain",
              "t_grid": [0.0, 12.0, 121],
              "theta_radii": [0.25, 2.0, 8], "theta_angles": 4,
              "theta_probe_re": 1.0, "theta_probe_im": 0.0,
              "cutoff": 10, "cutoffs": [8, 10], "dt": 0.0, "tol": 1e-12,
              "seed": 20260809, "sets": 3, "two_step_sets": 1, "sweep_sets": 1,
              "instances": 50, "k_max": 24},
      "output": {"directory": "out", "formats": ["csv", "json"]}
    })");
    return c;
  }

  static ScenarioConfig from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open config file " + path);
    ScenarioConfig c = defaults();
    ordered_json user;
    try {
      user = ordered_json::parse(f);
    } catch (const std::exception& e) {
      throw config_error(std::string("config parse error: ") + e.what());
    }
    c.tree_.merge_patch(user);
    return c;
  }

  /// Applies a dotted-path override, e.g. ("params.eta", "0.7").
  void override_key(const std::string& dotted, const std::string& value) {
    ordered_json* node = &tree_;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = dotted.find('.', start);
      const std::string key = dotted.substr(start, dot - start);
      if (key.empty()) throw config_error("empty key in override " + dotted);
      if (dot == std::string::npos) {
        ordered_json parsed;
        try {
          parsed = ordered_json::parse(value);
        } catch (...) {
          parsed = value;  // plain string
        }
        (*node)[key] = parsed;
        return;
      }
      node = &(*node)[key];
      start = dot + 1;
    }
  }

  const ordered_json& tree() const { return tree_; }

  ModelParams params() const {
    const auto& p = tree_.at("params");
    return validate_params(num(p, "E"), num(p, "epsilon"), num(p, "eta"),
                           num(p, "tau"), num(p, "sigma_minus"),
                           num(p, "sigma_plus"));
  }

  ModeState state(const std::string& which) const {
    const auto& s = tree_.at("states").at(which);
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "vacuum") return ModeState::vacuum();
    if (kind == "gibbs") return ModeState::gibbs(num(s, "beta"));
    if (kind == "displaced_gibbs")
      return ModeState::displaced_gibbs(
          num(s, "beta"), cxd(num(s, "mean_re"), num(s, "mean_im")));
    throw config_error("unknown state kind: " + kind);
  }

  double run_num(const std::string& key) const { return num(tree_.at("run"), key); }
  int run_int(const std::string& key) const {
    return int(num(tree_.at("run"), key));
  }

  std::vector<double> t_grid() const {
    return linspace(tree_.at("run").at("t_grid"));
  }

  /// Polar grid: radii (start, stop, count) x equally spaced angles.
  std::vector<cxd> theta_grid() const {
    const auto radii = linspace(tree_.at("run").at("theta_radii"));
    const int angles = run_int("theta_angles");
    if (angles < 1) throw config_error("theta_angles must be >= 1");
    std::vector<cxd> out;
    for (double r : radii)
      for (int a = 0; a < angles; ++a) {
        const double phi = 2.0 * 3.14159265358979323846 * double(a) / angles;
        out.push_back(r * std::exp(cxd(0.0, phi)));
      }
    return out;
  }

  double dt_or_default(const ModelParams& p) const {
    const double dt = run_num("dt");
    return dt > 0.0 ? dt : p.tau / 200.0;
  }

  std::string output_directory() const {
    if (const char* env = std::getenv("CAVICHAIN_OUT_DIR")) return env;
    return tree_.at("output").at("directory").get<std::string>();
  }

  std::vector<std::string> output_formats() const {
    return tree_.at("output").at("formats").get<std::vector<std::string>>();
  }

 private:
  static double num(const ordered_json& j, const std::string& key) {
    if (!j.contains(key)) throw config_error("missing config key: " + key);
    if (!j.at(key).is_number()) throw config_error("config key not numeric: " + key);
    return j.at(key).get<double>();
  }

  static std::vector<double> linspace(const ordered_json& triple) {
    if (!triple.is_array() || triple.size() != 3)
      throw config_error("grid must be a [start, stop, count] triple");
    const double a = triple[0].get<double>(), b = triple[1].get<double>();
    const int count = triple[2].get<int>();
    if (count < 1) throw config_error("grid count must be >= 1");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
      out[i] = count == 1 ? a : a + (b - a) * double(i) / double(count - 1);
    return out;
  }

  ordered_json tree_;
};

struct RunResult {
  std::vector<ResultTable> tables;
  bool check_failed = false;  // identities / oracle-check found violations
  double seconds = 0.0;
};

namespace detail {

inline void stamp_meta(ResultTable& t, const ScenarioConfig& cfg) {
  t.meta()["version"] = kVersion;
  t.meta()["seed"] = (long long)cfg.run_num("seed");
  t.meta()["config"] = cfg.tree();
}

inline double thermal_beta_of(const ModeState& s, const std::string& which) {
  if (!s.is_thermal())
    throw config_error(which + " must be a thermal state for this subcommand");
  return s.beta();
}

}  // namespace detail

inline RunResult run_scenario(const std::string& subcommand,
                              const ScenarioConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult result;
  const ModelParams p = cfg.params();

  if (subcommand == "blocks") {
    ResultTable t("blocks", {{"t", ColumnKind::real},
                             {"g", ColumnKind::complex_pair},
                             {"w", ColumnKind::complex_pair},
                             {"z_plus", ColumnKind::complex_pair},
                             {"z_minus", ColumnKind::complex_pair},
                             {"symplectic_defect", ColumnKind::complex_pair},
                             {"active_row_norm_sq", ColumnKind::real},
                             {"abs_gz", ColumnKind::real}});
    detail::stamp_meta(t, cfg);
    for (double time : cfg.t_grid()) {
      const PropagatorBlocks b = propagator_blocks(p, time);
      t.add_row(ResultTable::Row()
                    .real(time)
                    .complex(b.g)
                    .complex(b.w)
                    .complex(b.z_plus)
                    .complex(b.z_minus)
                    .complex(b.symplectic_defect())
                    .real(b.active_row_norm_sq())
                    .real(std::abs(b.gz())));
    }
    result.tables.push_back(std::move(t));
  } else if (subcommand == "steady") {
    const ModeState rho1 = cfg.state("rho1");
    const double beta = detail::thermal_beta_of(rho1, "rho1");
    const ThermoSummary th = thermo_summary(p, beta);
    ResultTable summary("steady_summary",
                        {{"lambda", ColumnKind::real},
                         {"coth_reservoir", ColumnKind::real},
                         {"beta_star_0", ColumnKind::real},
                         {"coth_effective", ColumnKind::real},
                         {"beta_star", ColumnKind::real},
                         {"beta", ColumnKind::real},
                         {"zero_temperature_reservoir", ColumnKind::real}});
    detail::stamp_meta(summary, cfg);
    summary.add_row(ResultTable::Row()
                        .real(th.lambda)
                        .real(th.coth_reservoir)
                        .real(th.beta_star_0)
                        .real(th.coth_effective)
                        .real(th.beta_star)
                        .real(th.beta)
                        .real(th.zero_temperature_reservoir ? 1.0 : 0.0));
    result.tables.push_back(std::move(summary));

    ResultTable t("steady_char_fn", {{"theta", ColumnKind::complex_pair},
                                     {"E", ColumnKind::complex_pair},
                                     {"abs_E", ColumnKind::real}});
    detail::stamp_meta(t, cfg);
    for (cxd theta : cfg.theta_grid()) {
      const cxd e = steady_state_char_fn(rho1, p, theta, cfg.run_num("tol"));
      t.add_row(ResultTable::Row().complex(theta).complex(e).real(std::abs(e)));
    }
    result.tables.push_back(std::move(t));
  } else if (subcommand == "relax") {
    const ModeState rho0 = cfg.state("rho0");
    const ModeState rho1 = cfg.state("rho1");
    const cxd probe(cfg.run_num("theta_probe_re"), cfg.run_num("theta_probe_im"));
    if (std::abs(probe) == 0.0) throw config_error("theta_probe must be nonzero");
    ResultTable t("relax", {{"t", ColumnKind::real},
                            {"E", ColumnKind::complex_pair},
                            {"coth_effective", ColumnKind::real},
                            {"occupation", ColumnKind::real}});
    detail::stamp_meta(t, cfg);
    for (double time : cfg.t_grid()) {
      const cxd e = cavity_char_fn(time, rho0, rho1, p, probe);
      const double c = -4.0 * std::log(std::abs(e)) / std::norm(probe);
      t.add_row(ResultTable::Row().real(time).complex(e).real(c).real(
          0.5 * (c - 1.0)));
    }
    result.tables.push_back(std::move(t));
  } else if (subcommand == "covariance") {
    const double beta0 = detail::thermal_beta_of(cfg.state("rho0"), "rho0");
    const double beta = detail::thermal_beta_of(cfg.state("rho1"), "rho1");
    const int N = cfg.run_int("N");
    const CovarianceMatrix cov = covariance(N, beta0, beta, p);
    ResultTable t("covariance", {{"j", ColumnKind::real},
                                 {"k", ColumnKind::real},
                                 {"X", ColumnKind::complex_pair},
                                 {"moment", ColumnKind::complex_pair}});
    detail::stamp_meta(t, cfg);
    const Eigen::MatrixXcd M = moments_from_covariance(cov.X);
    for (int j = 0; j <= N; ++j)
      for (int k = 0; k <= N; ++k)
        t.add_row(ResultTable::Row()
                      .real(j)
                      .real(k)
                      .complex(cov.X(j, k))
                      .complex(M(j, k)));
    result.tables.push_back(std::move(t));
  } else if (subcommand == "pair") {
    const double beta0 = detail::thermal_beta_of(cfg.state("rho0"), "rho0");
    const double beta = detail::thermal_beta_of(cfg.state("rho1"), "rho1");
    const std::string kind_name =
        cfg.tree().at("run").at("pair_kind").get<std::string>();
    PairKind kind;
    int first, second;
    if (kind_name == "cavity_chain") {
      kind = PairKind::cavity_chain;
      first = 0;
      second = cfg.run_int("n");
    } else if (kind_name == "chain_chain") {
      kind = PairKind::chain_chain;
      first = cfg.run_int("m");
      second = cfg.run_int("n");
    } else {
      throw config_error("pair_kind must be cavity_chain or chain_chain");
    }
    const int N_max = cfg.run_int("N");
    ResultTable t("pair", {{"N", ColumnKind::real},
                           {"X_aa", ColumnKind::complex_pair},
                           {"X_ab", ColumnKind::complex_pair},
                           {"X_bb", ColumnKind::complex_pair},
                           {"abs_X_ab", ColumnKind::real}});
    detail::stamp_meta(t, cfg);
    for (int N = second; N <= N_max; ++N) {
      const Eigen::Matrix2cd X =
          pair_covariance(kind, first, second, N, beta0, beta, p);
      t.add_row(ResultTable::Row()
                    .real(N)
                    .complex(X(0, 0))
                    .complex(X(0, 1))
                    .complex(X(1, 1))
                    .real(std::abs(X(0, 1))));
    }
    result.tables.push_back(std::move(t));
  } else if (subcommand == "window") {
    const ModeState rho1 = cfg.state("rho1");
    const ModeState rho0 = cfg.state("rho0");
    const int n = cfg.run_int("n");
    const double tol = cfg.run_num("tol");
    const WindowState w = window_state(n, p, rho1, tol);

    ResultTable fp("window_fixed_point", {{"theta", ColumnKind::complex_pair},
                                          {"E_star", ColumnKind::complex_pair}});
    detail::stamp_meta(fp, cfg);
    for (cxd theta : cfg.theta_grid()) {
      fp.add_row(ResultTable::Row().complex(theta).complex(
          fixed_point(rho1, p, theta, tol)));
    }
    result.tables.push_back(std::move(fp));

    if (rho1.is_thermal()) {
      const Eigen::MatrixXcd X = w.covariance();
      ResultTable cov("window_covariance", {{"j", ColumnKind::real},
                                            {"k", ColumnKind::real},
                                            {"X", ColumnKind::complex_pair}});
      detail::stamp_meta(cov, cfg);
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k)
          cov.add_row(ResultTable::Row().real(j).real(k).complex(X(j, k)));
      result.tables.push_back(std::move(cov));
    }

    // Finite-k approach to the window limit on a small label grid.
    Rng rng((unsigned long long)cfg.run_num("seed"));
    std::vector<WeylVector> grid;
    for (int i = 0; i < 8; ++i) {
      WeylVector z(n + 1);
      for (int j = 0; j <= n; ++j) z(j) = 0.5 * rng.complex_normal();
      grid.push_back(std::move(z));
    }
    ResultTable conv("window_convergence",
                     {{"k", ColumnKind::real}, {"deviation", ColumnKind::real}});
    detail::stamp_meta(conv, cfg);
    const int k_max = cfg.run_int("k_max");
    for (int k = 0; k <= k_max; k += 2) {
      double dev = 0.0;
      for (const auto& z : grid)
        dev = std::max(dev, std::abs(window_finite_k(n, k, rho0, rho1, p, z) -
                                     w.modified_pairing(z)));
      conv.add_row(ResultTable::Row().real(k).real(dev));
    }
    result.tables.push_back(std::move(conv));
  } else if (subcommand == "oracle-check") {
    std::vector<int> cutoffs =
        cfg.tree().at("run").at("cutoffs").get<std::vector<int>>();
    cutoffs.push_back(cfg.run_int("cutoff"));
    std::sort(cutoffs.begin(), cutoffs.end());
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
    const auto rep = run_oracle_check(
        (unsigned long long)cfg.run_num("seed"), cfg.run_int("sets"),
        cfg.run_int("two_step_sets"), cutoffs, 1e-4, 5e-4,
        cfg.run_int("sweep_sets"));
    auto make_table = [&](const std::string& name,
                          const std::vector<OracleCaseResult>& cases) {
      ResultTable t(name, {{"set", ColumnKind::real},
                           {"n_steps", ColumnKind::real},
                           {"cutoff", ColumnKind::real},
                           {"E", ColumnKind::real},
                           {"epsilon", ColumnKind::real},
                           {"eta", ColumnKind::real},
                           {"tau", ColumnKind::real},
                           {"sigma_minus", ColumnKind::real},
                           {"sigma_plus", ColumnKind::real},
                           {"beta0", ColumnKind::real},
                           {"beta", ColumnKind::real},
                           {"moment_error", ColumnKind::real},
                           {"charfn_error", ColumnKind::real}});
      detail::stamp_meta(t, cfg);
      for (const auto& c : cases)
        t.add_row(ResultTable::Row()
                      .real(c.set_index)
                      .real(c.n_steps)
                      .real(c.cutoff)
                      .real(c.params.E)
                      .real(c.params.epsilon)
                      .real(c.params.eta)
                      .real(c.params.tau)
                      .real(c.params.sigma_minus)
                      .real(c.params.sigma_plus)
                      .real(c.beta0)
                      .real(c.beta)
                      .real(c.moment_error)
                      .real(c.charfn_error));
      return t;
    };
    result.tables.push_back(make_table("oracle_check", rep.cases));
    result.tables.push_back(make_table("oracle_check_sweep", rep.sweep));
    result.check_failed = !rep.pass;
  } else if (subcommand == "identities") {
    const auto rows = run_identity_battery((unsigned long long)cfg.run_num("seed"),
                                           cfg.run_int("instances"),
                                           cfg.run_num("tol"), 1e-10);
    ResultTable t("identities", {{"identity", ColumnKind::text},
                                 {"instances", ColumnKind::real},
                                 {"max_deviation", ColumnKind::real},
                                 {"tolerance", ColumnKind::real},
                                 {"pass", ColumnKind::real}});
    detail::stamp_meta(t, cfg);
    bool all_pass = true;
    for (const auto& r : rows) {
      t.add_row(ResultTable::Row()
                    .text(r.name)
                    .real(r.instances)
                    .real(r.max_deviation)
                    .real(r.tolerance)
                    .real(r.pass ? 1.0 : 0.0));
      all_pass = all_pass && r.pass;
    }
    result.tables.push_back(std::move(t));
    result.check_failed = !all_pass;
  } else {
    throw config_error("unknown subcommand: " + subcommand);
  }

  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

/// Exit codes of the command-line tool, one per error class.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_config = 2,
  exit_condition = 3,
  exit_budget = 4,
  exit_io = 5,
  exit_nonconvergent = 6,
  exit_check_failed = 7,
};

}  // namespace cavichain

#endif  // CAVICHAIN_SCENARIO_HPP
