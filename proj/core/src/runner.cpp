#include "fcs/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fcs/analysis.hpp"
#include "fcs/fock.hpp"
#include "fcs/quasifree.hpp"

namespace fcs {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
      throw std::logic_error("output table: row width mismatch");
    rows.push_back(std::move(cells));
  }
};

struct OutputFile {
  std::string name;  // without extension
  Table table;
  json mirror;
};

std::string render_csv(const OutputFile& f, const std::string& command,
                       const ExperimentConfig& cfg) {
  std::string out;
  out += std::string("# erasure-fcs ") + kCodeVersion + "\n";
  out += "# command: " + command + "\n";
  out += "# config: " + cfg.canonical_text() + "\n";
  for (std::size_t i = 0; i < f.table.columns.size(); ++i)
    out += (i ? "," : "") + f.table.columns[i];
  out += "\n";
  for (const auto& row : f.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

json mirror_base(const std::string& command, const ExperimentConfig& cfg) {
  json j;
  j["tool"] = "erasure-fcs";
  j["version"] = kCodeVersion;
  j["command"] = command;
  j["config"] = json::parse(cfg.canonical_text());
  return j;
}

void require_oracle_capable(int L) {
  if (L > kFockHardCap)
    throw std::invalid_argument("oracle engine: L = " + std::to_string(L) +
                                " exceeds the exact-engine cap " +
                                std::to_string(kFockHardCap) + "; use engine = quasifree");
}

struct OracleRun {
  FockPropagation prop;
  Matrix eta_i;
  Matrix h_res;
};

OracleRun oracle_run(const DriveProtocol& p, double T, int L, int steps) {
  require_oracle_capable(L);
  OracleRun r;
  r.prop = propagate_fock(p, T, L, steps);
  r.eta_i = gibbs_state(fock_hamiltonian(p, 0.0, L), p.beta);
  r.h_res = reservoir_hamiltonian(p, L);
  return r;
}

OutputFile cmd_fcs(const ExperimentConfig& cfg) {
  const int L = cfg.L.front();
  const double T = cfg.T.front();
  const auto grid = cfg.alpha_grid.points();
  const bool imag = cfg.alpha_grid.imaginary;
  const bool want_oracle = cfg.engine != Engine::kQuasifree;
  const bool want_qf = cfg.engine != Engine::kOracle;
  if (imag && want_oracle)
    throw std::invalid_argument("fcs: the oracle engine only supports the real alpha axis");

  OutputFile f;
  f.name = "fcs";
  f.table.columns = {imag ? "theta" : "alpha"};
  std::optional<CgfCurve> qf, orc;
  if (want_qf) {
    const auto prop = propagate_one_particle(cfg.protocol, T, L, cfg.steps);
    qf = heat_cgf_determinant(prop, cfg.protocol, grid, imag);
    if (imag) {
      f.table.columns.push_back("chi_quasifree_re");
      f.table.columns.push_back("chi_quasifree_im");
    } else {
      f.table.columns.push_back("chi_quasifree");
    }
    f.table.columns.push_back("valid_quasifree");
  }
  if (want_oracle) {
    const auto run = oracle_run(cfg.protocol, T, L, cfg.steps);
    orc = heat_fcs_oracle(run.prop.u, run.eta_i, run.h_res, grid).cgf;
    f.table.columns.push_back("chi_oracle");
    f.table.columns.push_back("valid_oracle");
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> row = {fmt(grid[i])};
    if (qf) {
      row.push_back(fmt(qf->values[i].real()));
      if (imag) row.push_back(fmt(qf->values[i].imag()));
      row.push_back(qf->valid[i] ? "1" : "0");
    }
    if (orc) {
      row.push_back(fmt(orc->values[i].real()));
      row.push_back(orc->valid[i] ? "1" : "0");
    }
    f.table.add_row(std::move(row));
  }
  f.mirror["L"] = L;
  f.mirror["T"] = T;
  f.mirror["columns"] = f.table.columns;
  f.mirror["rows"] = f.table.rows;
  return f;
}

OutputFile cmd_oracle_check(const ExperimentConfig& cfg) {
  const auto grid = cfg.alpha_grid.points();
  if (cfg.alpha_grid.imaginary)
    throw std::invalid_argument("oracle-check: requires a real alpha grid");
  const double beta = cfg.protocol.beta;
  std::vector<double> renyi_grid;
  for (double a : grid)
    if (a > 1e-12 && a <= beta + 1e-12) renyi_grid.push_back(a);

  OutputFile f;
  f.name = "oracle_check";
  f.table.columns = {"L", "T", "max_abs_dchi", "renyi_dev_oracle", "renyi_dev_quasifree"};
  for (int L : cfg.L) {
    require_oracle_capable(L);
    for (double T : cfg.T) {
      const auto run = oracle_run(cfg.protocol, T, L, cfg.steps);
      const auto oracle = heat_fcs_oracle(run.prop.u, run.eta_i, run.h_res, grid);
      const auto prop = propagate_one_particle(cfg.protocol, T, L, cfg.steps);
      const auto det = heat_cgf_determinant(prop, cfg.protocol, grid);

      double max_dchi = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!oracle.cgf.valid[i] || !det.valid[i])
          throw std::runtime_error("oracle-check: invalid CGF point at alpha = " +
                                   std::to_string(grid[i]));
        max_dchi =
            std::max(max_dchi, std::abs(oracle.cgf.values[i].real() - det.values[i].real()));
      }

      // the heat CGF must coincide with the relative-entropy form in each
      // engine separately
      const Matrix rho1 = run.prop.u * run.eta_i * run.prop.u.adjoint();
      double dev_oracle = 0.0;
      for (double a : renyi_grid)
        dev_oracle = std::max(
            dev_oracle, std::abs(oracle.cgf.value_at(a) -
                                 renyi_relative_entropy(run.eta_i, rho1, a / beta)));
      const auto renyi_qf = renyi_cgf_quasifree(prop, cfg.protocol, renyi_grid);
      double dev_qf = 0.0;
      for (std::size_t i = 0; i < renyi_grid.size(); ++i)
        dev_qf = std::max(dev_qf, std::abs(renyi_qf.values[i].real() -
                                           det.value_at(renyi_grid[i])));

      f.table.add_row({std::to_string(L), fmt(T), fmt(max_dchi), fmt(dev_oracle), fmt(dev_qf)});
    }
  }
  f.mirror["columns"] = f.table.columns;
  f.mirror["rows"] = f.table.rows;
  return f;
}

OutputFile cmd_sweep(const ExperimentConfig& cfg, int workers) {
  if (cfg.alpha_grid.imaginary)
    throw std::invalid_argument("sweep: requires a real alpha grid");
  const auto study =
      convergence_study(cfg.protocol, cfg.L, cfg.T, cfg.alpha_grid.points(), workers);

  OutputFile f;
  f.name = "sweep";
  f.table.columns = {"L", "T", "sup_alpha_error", "mean_heat", "entropy_production", "valid"};
  for (const auto& c : study.cells)
    f.table.add_row({std::to_string(c.L), fmt(c.T), fmt(c.sup_alpha_error), fmt(c.mean_heat),
                     fmt(c.entropy_production), c.valid ? "1" : "0"});
  f.mirror["columns"] = f.table.columns;
  f.mirror["rows"] = f.table.rows;
  f.mirror["monotone_at_largest_L"] = study.monotone_at_largest_L;

  if (cfg.wrong_order) {
    // fixed-L adiabatic diagnostic: freeze the coupling so the exact
    // engine tracks instantaneous eigenstates instead of equilibria
    DriveProtocol frozen = cfg.protocol;
    frozen.schedule_kind = ScheduleKind::kFrozenCoupling;
    const auto diag =
        wrong_order_diagnostic(frozen, cfg.wrong_order->L, cfg.wrong_order->T, cfg.steps);
    f.mirror["wrong_order"] = {{"L", diag.L},
                               {"T", diag.T},
                               {"trace_distance_to_target", diag.trace_distance_to_target},
                               {"trace_distance_initial", diag.trace_distance_initial}};
  }
  return f;
}

OutputFile cmd_figure3(const ExperimentConfig& cfg) {
  const double beta = cfg.protocol.beta;
  constexpr int kPoints = 61;  // puts 0.5 beta, beta and 1.25 beta on the grid exactly
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = 1.5 * beta * i / (kPoints - 1);

  OutputFile f;
  f.name = "figure3";
  f.table.columns = {"alpha"};
  std::vector<CgfCurve> curves;
  for (int k = 1; k <= 5; ++k) {
    curves.push_back(epsilon_family_cgf(std::pow(10.0, -k), 2, beta, grid));
    char col[32];
    std::snprintf(col, sizeof col, "chi_eps_1e-%02d", k);
    f.table.columns.push_back(col);
  }
  for (int i = 0; i < kPoints; ++i) {
    std::vector<std::string> row = {fmt(grid[i])};
    for (const auto& c : curves) row.push_back(fmt(c.values[i].real()));
    f.table.add_row(std::move(row));
  }
  f.mirror["columns"] = f.table.columns;
  f.mirror["rows"] = f.table.rows;
  return f;
}

OutputFile cmd_landauer(const ExperimentConfig& cfg) {
  const int L = cfg.L.front();
  const double T = cfg.T.front();
  const auto prop = propagate_one_particle(cfg.protocol, T, L, cfg.steps);
  const double mean_heat = expected_heat(prop, cfg.protocol);
  const Matrix rho_i = 0.5 * Matrix::Identity(2, 2);
  const auto rep = landauer_report(mean_heat, rho_i, final_reduced_system_state(prop, cfg.protocol),
                                   cfg.protocol.beta);

  OutputFile f;
  f.name = "landauer";
  f.table.columns = {"L",    "T",   "mean_heat", "entropy_drop", "entropy_production",
                     "bound_satisfied", "saturation_gap"};
  f.table.add_row({std::to_string(L), fmt(T), fmt(rep.mean_heat), fmt(rep.entropy_drop),
                   fmt(rep.entropy_production), rep.bound_satisfied ? "1" : "0",
                   fmt(rep.saturation_gap)});
  f.mirror["columns"] = f.table.columns;
  f.mirror["rows"] = f.table.rows;
  return f;
}

OutputFile cmd_atoms(const ExperimentConfig& cfg) {
  const auto spec = LimitSpec::from_protocol(cfg.protocol);
  const auto dist = heat_atoms(spec);

  OutputFile f;
  f.name = "atoms";
  f.table.columns = {"heat", "probability"};
  for (const auto& a : dist.atoms) f.table.add_row({fmt(a.value), fmt(a.prob)});
  f.mirror["columns"] = f.table.columns;
  f.mirror["rows"] = f.table.rows;
  f.mirror["mean"] = dist.mean();
  f.mirror["variance"] = dist.variance();
  return f;
}

}  // namespace

std::vector<std::string> known_commands() {
  return {"fcs", "oracle-check", "sweep", "figure3", "landauer", "atoms"};
}

std::vector<std::string> run_command(const std::string& command, const ExperimentConfig& cfg_in,
                                     const RunOptions& opts) {
  if (opts.workers < 1) throw std::invalid_argument("workers must be >= 1");
  ExperimentConfig cfg = cfg_in;
  if (opts.engine_override) cfg.engine = *opts.engine_override;
  cfg.check();  // rejected configs must produce no output files

  OutputFile file;
  if (command == "fcs") file = cmd_fcs(cfg);
  else if (command == "oracle-check") file = cmd_oracle_check(cfg);
  else if (command == "sweep") file = cmd_sweep(cfg, opts.workers);
  else if (command == "figure3") file = cmd_figure3(cfg);
  else if (command == "landauer") file = cmd_landauer(cfg);
  else if (command == "atoms") file = cmd_atoms(cfg);
  else throw std::invalid_argument("unknown command '" + command + "'");

  // all computation done; only now touch the filesystem
  std::filesystem::create_directories(opts.out_dir);
  const std::string csv_path = (std::filesystem::path(opts.out_dir) / (file.name + ".csv")).string();
  const std::string json_path =
      (std::filesystem::path(opts.out_dir) / (file.name + ".json")).string();

  json mirror = mirror_base(command, cfg);
  mirror.update(file.mirror);

  {
    std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    out << render_csv(file, command, cfg);
  }
  {
    std::ofstream out(json_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + json_path);
    out << mirror.dump(2) << "\n";
  }
  return {csv_path, json_path};
}

}  // namespace fcs
