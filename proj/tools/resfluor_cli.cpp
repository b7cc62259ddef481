// resfluor: command-line front end for the resonance-fluorescence experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "resfluor/atom_dynamics.hpp"
#include "resfluor/config.hpp"
#include "resfluor/correlation.hpp"
#include "resfluor/error.hpp"
#include "resfluor/experiment.hpp"
#include "resfluor/ion_trap.hpp"
#include "resfluor/oracle.hpp"
#include "resfluor/output.hpp"
#include "resfluor/witness.hpp"

using namespace resfluor;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  bool verify = false;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  int order = 4;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "config file with dotted keys")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "base seed (overrides mc.seed)");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--verify", o.verify, "re-check minors against the exact oracle (N <= 6)");
  cmd->add_option("--workers", o.workers, "worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig load(const CommonOptions& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

Format pick_format(const CommonOptions& o, Format fallback) {
  if (o.format.empty()) return fallback;
  return o.format == "json" ? Format::Json : Format::Csv;
}

void emit(const std::string& text, const CommonOptions& o) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot write " + o.out);
  f << text;
}

// Returns the process exit code: 1 when a --verify check exceeded tolerance.
int verified(const Table& t) {
  int status = 0;
  auto check = [&](const Cell& c) {
    if (const auto* d = std::get_if<double>(&c); d && !(*d < kVerifyTolerance)) status = 1;
  };
  if (auto it = t.notes.find("verify_max_deviation"); it != t.notes.end()) check(it->second);
  if (auto it = t.notes.find("bloch_deviation"); it != t.notes.end())
    if (!(std::get<double>(it->second) < 1e-8)) status = 1;
  for (std::size_t k = 0; k < t.columns.size(); ++k)
    if (t.columns[k] == "verify_max_deviation" || t.columns[k] == "moment_deviation" ||
        t.columns[k] == "minor_deviation")
      for (const auto& row : t.rows) check(row[k]);
  if (status) std::cerr << "verify: deviation from the exact oracle above " << kVerifyTolerance << "\n";
  return status;
}

Table steady_table(const ExperimentConfig& cfg, bool verify) {
  const auto params = resolved_atom(cfg);
  const auto s = steady_state(params);
  Table t;
  t.kind = "steady";
  t.columns = {"n", "gamma2", "detuning", "rabi", "sigma22", "sigma21_re", "sigma21_im",
               "coherence_ratio", "ratio_condition", "rabi_max"};
  for (int n : cfg.n_atoms) {
    Cell ratio = params.rabi > 0.0 ? Cell{coherence_ratio(params)} : Cell{};
    Cell cond = params.rabi > 0.0 ? Cell{ratio_condition(n, s)} : Cell{};
    t.add({std::int64_t{n}, params.gamma2, params.detuning, params.rabi, s.sigma22, s.sigma21.real(),
           s.sigma21.imag(), ratio, cond, cell(entanglement_rabi_bound(n, 1.0, params.gamma2, params.detuning))});
  }
  if (verify) {
    // long-time Bloch integration from the ground state
    const auto path = bloch_integrate(params, AtomicSteadyState{}, 400.0);
    const auto& end = path.back().state;
    t.notes["bloch_deviation"] = std::max(std::abs(end.sigma22 - s.sigma22), std::abs(end.sigma21 - s.sigma21));
  }
  return t;
}

Table trap_table(const ExperimentConfig& cfg) {
  Table t;
  t.kind = "trap";
  t.notes["delta_z_m_at_lambda"] = position_uncertainty(1.0, cfg.species).meters;
  t.notes["gamma_max_lambda"] = max_scale(cfg.species, cfg.jitter_cap_lambda);
  t.columns = {"n", "index", "u", "force_residual"};
  for (int n : cfg.n_atoms) {
    const auto u = equilibrium_positions(n);
    const double residual = force_residual(u);
    for (std::size_t i = 0; i < u.size(); ++i)
      t.add({std::int64_t{n}, static_cast<std::int64_t>(i), u[i], residual});
  }
  return t;
}

Table moments_table(const ExperimentConfig& cfg, int order, bool verify) {
  const auto state = resolved_state(cfg);
  Table t;
  t.kind = "moments";
  t.columns = {"n", "p", "q", "r", "s", "re", "im", "moment_deviation"};
  for (int n : cfg.n_atoms) {
    const auto scene = config_scene(cfg, chain_positions(n, cfg.spacing_lambda));
    const auto phases = phase_factors(scene);
    std::optional<oracle::JointState> joint;
    if (verify && n <= kVerifyMaxAtoms) joint = oracle::build_joint_state(state, n);
    for (int p = 0; p <= order; ++p)
      for (int q = 0; p + q <= order; ++q)
        for (int r = 0; p + q + r <= order; ++r)
          for (int s = 0; p + q + r + s <= order; ++s) {
            if (p + q + r + s == 0) continue;
            const MomentSpec spec{p, q, r, s};
            const auto m = moment(phases, state, spec);
            Cell dev;
            if (joint) dev = std::abs(m - oracle::oracle_moment(*joint, phases, spec));
            t.add({std::int64_t{n}, std::int64_t{p}, std::int64_t{q}, std::int64_t{r}, std::int64_t{s},
                   m.real(), m.imag(), dev});
          }
  }
  return t;
}

Table verify_table(const ExperimentConfig& cfg) {
  const auto state = resolved_state(cfg);
  Table t;
  t.kind = "verify";
  t.columns = {"n", "mu_engine", "mu_oracle", "minor_deviation", "moment_deviation"};
  for (int n : cfg.n_atoms) {
    if (n > kVerifyMaxAtoms) continue;
    const auto scene = config_scene(cfg, chain_positions(n, cfg.spacing_lambda));
    const auto eval = minor_mu(scene, state);
    const auto joint = oracle::build_joint_state(state, n);
    const double exact = oracle::oracle_minor(joint, scene);
    const double ref = eval.scale > 0.0 ? eval.scale : 1.0;
    const auto phases = phase_factors(scene);
    double worst = 0.0;
    for (int p = 0; p <= 4; ++p)
      for (int q = 0; p + q <= 4; ++q)
        for (int r = 0; p + q + r <= 4; ++r)
          for (int s = 0; p + q + r + s <= 4; ++s) {
            if (p + q + r + s == 0) continue;
            const MomentSpec spec{p, q, r, s};
            worst = std::max(worst, std::abs(moment(phases, state, spec) - oracle::oracle_moment(joint, phases, spec)));
          }
    t.add({std::int64_t{n}, eval.mu_full, exact, std::abs(eval.mu_full - exact) / ref, worst});
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement of resonance-fluorescence light: steady states, minors, trap jitter"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* steady = app.add_subcommand("steady", "single-atom steady state and drive bounds");
  auto* scan = app.add_subcommand("scan-angle", "normalized minor versus detector-2 azimuth");
  auto* threshold = app.add_subcommand("threshold", "Rabi bounds over (N, gamma2, detuning)");
  auto* trap = app.add_subcommand("trap", "Coulomb-chain positions and position uncertainty");
  auto* optimize = app.add_subcommand("optimize", "trap scale minimizing the jitter-free minor");
  auto* mc = app.add_subcommand("mc", "position-jitter Monte Carlo at the optimized scale");
  auto* random = app.add_subcommand("random", "minor over randomly placed atoms");
  auto* moments = app.add_subcommand("moments", "normally ordered field moments");
  auto* verify = app.add_subcommand("verify", "engine versus exact oracle spot check");
  for (auto* cmd : {steady, scan, threshold, trap, optimize, mc, random, moments, verify}) add_common(cmd, o);
  moments->add_option("--order", o.order, "maximal total order")->check(CLI::Range(0, 12));

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = load(o);
    Table table;
    Format fallback = Format::Json;
    if (steady->parsed()) {
      table = steady_table(cfg, o.verify);
    } else if (scan->parsed()) {
      table = angle_scan_table(run_angle_scan(cfg, o.verify));
      fallback = Format::Csv;
    } else if (threshold->parsed()) {
      table = threshold_table(run_threshold_map(cfg));
      fallback = Format::Csv;
    } else if (trap->parsed()) {
      table = trap_table(cfg);
      fallback = Format::Csv;
    } else if (optimize->parsed()) {
      std::vector<ScaleOptimum> rows;
      for (int n : cfg.n_atoms) rows.push_back(optimize_scale(cfg, n, o.verify));
      table = optimum_table(rows);
    } else if (mc->parsed()) {
      std::vector<McReport> rows;
      for (int n : cfg.n_atoms) rows.push_back(run_monte_carlo(cfg, n, o.workers, o.verify));
      table = monte_carlo_table(rows);
    } else if (random->parsed()) {
      std::vector<RandomEnsembleReport> rows;
      for (int n : cfg.n_atoms) rows.push_back(run_random_ensemble(cfg, n, o.workers));
      table = random_table(rows);
    } else if (moments->parsed()) {
      table = moments_table(cfg, o.order, o.verify);
      fallback = Format::Csv;
    } else {
      table = verify_table(cfg);
    }
    emit(render(table, cfg, pick_format(o, fallback)), o);
    return (o.verify || verify->parsed()) ? verified(table) : 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
