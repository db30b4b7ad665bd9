#include "fcs/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "fcs/fock.hpp"
#include "fcs/quasifree.hpp"

namespace fcs {

void LimitSpec::check() const {
  if (d < 2) throw std::invalid_argument("LimitSpec: d must be >= 2");
  if (beta <= 0.0) throw std::invalid_argument("LimitSpec: beta must be > 0");
  if (probs.empty() || probs.size() != multiplicities.size())
    throw std::invalid_argument("LimitSpec: probs and multiplicities must match and be nonempty");
  double mass = 0.0;
  int levels = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) throw std::invalid_argument("LimitSpec: probabilities must be positive");
    if (multiplicities[k] < 1)
      throw std::invalid_argument("LimitSpec: multiplicities must be >= 1");
    mass += multiplicities[k] * probs[k];
    levels += multiplicities[k];
  }
  if (levels != d) throw std::invalid_argument("LimitSpec: multiplicities must sum to d");
  if (std::abs(mass - 1.0) > 1e-12)
    throw std::invalid_argument("LimitSpec: spectrum mass " + std::to_string(mass) +
                                " != 1 within 1e-12");
}

LimitSpec LimitSpec::two_level(double p1, double p2, double beta) {
  LimitSpec s;
  s.d = 2;
  s.probs = {p1, p2};
  s.multiplicities = {1, 1};
  s.beta = beta;
  s.check();
  return s;
}

LimitSpec LimitSpec::from_erasure_error(double eps, int d, double beta) {
  if (eps <= 0.0 || eps >= 0.5)
    throw std::invalid_argument("LimitSpec: erasure error must lie in (0, 1/2)");
  LimitSpec s;
  s.d = d;
  s.probs = {1.0 - eps, eps / (d - 1)};
  s.multiplicities = {1, d - 1};
  s.beta = beta;
  s.erasure_error = eps;
  s.check();
  return s;
}

LimitSpec LimitSpec::from_protocol(const DriveProtocol& p) {
  p.check();
  return two_level(p.target_probs[0], p.target_probs[1], p.beta);
}

double LimitSpec::entropy() const {
  double s = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k)
    s -= multiplicities[k] * probs[k] * std::log(probs[k]);
  return s;
}

double LimitSpec::entropy_drop() const { return std::log(static_cast<double>(d)) - entropy(); }

CgfCurve limiting_cgf(const LimitSpec& spec, const std::vector<double>& alpha_grid) {
  spec.check();
  CgfCurve curve;
  curve.provenance = "closed-form";
  curve.alphas = alpha_grid;
  const double logd = std::log(static_cast<double>(spec.d));
  for (double a : alpha_grid) {
    double sum = 0.0;
    for (std::size_t k = 0; k < spec.probs.size(); ++k)
      sum += spec.multiplicities[k] * std::pow(spec.probs[k], 1.0 - a / spec.beta);
    curve.values.emplace_back(-(a / spec.beta) * logd + std::log(sum), 0.0);
    curve.valid.push_back(true);
  }
  return curve;
}

HeatDistribution heat_atoms(const LimitSpec& spec) {
  spec.check();
  HeatDistribution dist;
  const double logd = std::log(static_cast<double>(spec.d));
  for (std::size_t k = 0; k < spec.probs.size(); ++k)
    dist.atoms.push_back({(logd + std::log(spec.probs[k])) / spec.beta,
                          spec.multiplicities[k] * spec.probs[k]});
  std::sort(dist.atoms.begin(), dist.atoms.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  return dist;
}

double closed_form_cumulants(const LimitSpec& spec, int n) {
  spec.check();
  if (n < 1) throw std::invalid_argument("closed_form_cumulants: n must be >= 1");
  if (n == 1) return spec.entropy_drop() / spec.beta;

  // log-derivatives of M(g) = sum m_k p_k^g at g = 1: with M(1) = 1 the
  // raw derivatives A_j = sum m_k p_k (log p_k)^j feed the standard
  // moment-to-cumulant recursion.
  std::vector<double> a(n + 1, 0.0);
  for (int j = 1; j <= n; ++j)
    for (std::size_t k = 0; k < spec.probs.size(); ++k)
      a[j] += spec.multiplicities[k] * spec.probs[k] * std::pow(std::log(spec.probs[k]), j);

  std::vector<double> c(n + 1, 0.0);
  auto binom = [](int m, int r) {
    double b = 1.0;
    for (int i = 0; i < r; ++i) b = b * (m - i) / (i + 1);
    return b;
  };
  for (int m = 1; m <= n; ++m) {
    c[m] = a[m];
    for (int j = 1; j < m; ++j) c[m] -= binom(m - 1, j - 1) * c[j] * a[m - j];
  }
  return c[n] / std::pow(spec.beta, n);
}

double numeric_cumulants(const CgfCurve& curve, int n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("numeric_cumulants: only orders 1..4 are implemented");
  if (curve.imaginary_axis)
    throw std::invalid_argument("numeric_cumulants: needs a real-axis grid");

  // locate the symmetric 7-point stencil {-3h..3h} around 0
  auto find = [&](double a) -> double {
    for (std::size_t i = 0; i < curve.alphas.size(); ++i)
      if (std::abs(curve.alphas[i] - a) <= 1e-12 * (1.0 + std::abs(a))) {
        if (!curve.valid.empty() && !curve.valid[i])
          throw std::invalid_argument("numeric_cumulants: stencil point flagged invalid");
        return curve.values[i].real();
      }
    throw std::invalid_argument("numeric_cumulants: grid too coarse, missing stencil point " +
                                std::to_string(a));
  };
  // spacing: smallest positive grid value
  double h = 0.0;
  for (double a : curve.alphas)
    if (a > 1e-15 && (h == 0.0 || a < h)) h = a;
  if (h == 0.0) throw std::invalid_argument("numeric_cumulants: no positive grid points");

  double f[7];  // f[j] = chi((j - 3) h)
  for (int j = 0; j < 7; ++j) f[j] = find((j - 3) * h);

  double deriv = 0.0;
  switch (n) {
    case 1: deriv = (-f[5] + 8.0 * f[4] - 8.0 * f[2] + f[1]) / (12.0 * h); break;
    case 2:
      deriv = (-f[5] + 16.0 * f[4] - 30.0 * f[3] + 16.0 * f[2] - f[1]) / (12.0 * h * h);
      break;
    case 3:
      deriv = (-f[6] + 8.0 * f[5] - 13.0 * f[4] + 13.0 * f[2] - 8.0 * f[1] + f[0]) /
              (8.0 * h * h * h);
      break;
    case 4:
      deriv = (-f[6] + 12.0 * f[5] - 39.0 * f[4] + 56.0 * f[3] - 39.0 * f[2] + 12.0 * f[1] -
               f[0]) /
              (6.0 * h * h * h * h);
      break;
  }
  return (n % 2 == 0) ? deriv : -deriv;
}

CgfCurve epsilon_family_cgf(double eps, int d, double beta,
                            const std::vector<double>& alpha_grid) {
  return limiting_cgf(LimitSpec::from_erasure_error(eps, d, beta), alpha_grid);
}

CgfCurve success_limit_cgf(double eps, int d, double beta,
                           const std::vector<double>& alpha_grid) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("success_limit_cgf: eps must lie in [0, 1)");
  if (d < 2) throw std::invalid_argument("success_limit_cgf: d must be >= 2");
  if (beta <= 0.0) throw std::invalid_argument("success_limit_cgf: beta must be > 0");
  CgfCurve curve;
  curve.provenance = "closed-form";
  curve.alphas = alpha_grid;
  const double slope = -(std::log(static_cast<double>(d)) + std::log1p(-eps)) / beta;
  for (double a : alpha_grid) {
    curve.values.emplace_back(slope * a, 0.0);
    curve.valid.push_back(true);
  }
  return curve;
}

LandauerReport landauer_report(double mean_heat, const Matrix& initial_reduced_state,
                               const Matrix& final_reduced_state, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("landauer_report: beta must be > 0");
  for (const Matrix* rho : {&initial_reduced_state, &final_reduced_state}) {
    if (!is_hermitian(*rho, 1e-10) || std::abs(rho->trace().real() - 1.0) > 1e-8)
      throw std::invalid_argument("landauer_report: reduced states must be density matrices");
  }
  LandauerReport rep;
  rep.mean_heat = mean_heat;
  rep.entropy_drop =
      von_neumann_entropy(initial_reduced_state) - von_neumann_entropy(final_reduced_state);
  rep.entropy_production = beta * mean_heat - rep.entropy_drop;
  rep.bound_satisfied = rep.entropy_production >= -1e-8;
  rep.saturation_gap = rep.entropy_production;
  return rep;
}

ConvergenceStudy convergence_study(const DriveProtocol& p, const std::vector<int>& L_list,
                                   const std::vector<double>& T_list,
                                   const std::vector<double>& alpha_grid, int workers) {
  p.check();
  if (L_list.empty() || T_list.empty())
    throw std::invalid_argument("convergence_study: L and T lists must be nonempty");
  if (workers < 1) throw std::invalid_argument("convergence_study: workers must be >= 1");

  const CgfCurve limit = limiting_cgf(LimitSpec::from_protocol(p), alpha_grid);
  const std::size_t n_cells = L_list.size() * T_list.size();
  ConvergenceStudy study;
  study.cells.resize(n_cells);

  auto run_cell = [&](std::size_t idx) {
    ConvergenceCell cell;
    cell.L = L_list[idx / T_list.size()];
    cell.T = T_list[idx % T_list.size()];
    try {
      const auto prop = propagate_one_particle(p, cell.T, cell.L);
      const auto curve = heat_cgf_determinant(prop, p, alpha_grid);
      double sup = 0.0;
      for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!curve.valid[i]) throw std::runtime_error("invalid CGF point");
        sup = std::max(sup, std::abs(curve.values[i].real() - limit.values[i].real()));
      }
      cell.sup_alpha_error = sup;
      cell.mean_heat = expected_heat(prop, p);
      const Matrix rho_i = 0.5 * Matrix::Identity(2, 2);
      cell.entropy_production =
          landauer_report(cell.mean_heat, rho_i, final_reduced_system_state(prop, p), p.beta)
              .entropy_production;
    } catch (const std::exception&) {
      cell.valid = false;
    }
    study.cells[idx] = cell;
  };

  if (workers == 1 || n_cells == 1) {
    for (std::size_t i = 0; i < n_cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(workers, n_cells);
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n_cells; i = next.fetch_add(1)) run_cell(i);
      });
    for (auto& th : pool) th.join();
  }

  // monotonicity of the sup error in T at the largest L
  const int l_max = *std::max_element(L_list.begin(), L_list.end());
  const std::size_t row =
      std::find(L_list.begin(), L_list.end(), l_max) - L_list.begin();
  study.monotone_at_largest_L = T_list.size() >= 2;
  for (std::size_t j = 0; j + 1 < T_list.size(); ++j) {
    const auto& a = study.cells[row * T_list.size() + j];
    const auto& b = study.cells[row * T_list.size() + j + 1];
    if (!a.valid || !b.valid || b.sup_alpha_error >= a.sup_alpha_error)
      study.monotone_at_largest_L = false;
  }
  return study;
}

WrongOrderDiagnostic wrong_order_diagnostic(const DriveProtocol& p, int L, double T,
                                            int steps) {
  p.check();
  WrongOrderDiagnostic diag;
  diag.L = L;
  diag.T = T;

  const auto prop = propagate_fock(p, T, L, steps);
  const Matrix eta_i = gibbs_state(fock_hamiltonian(p, 0.0, L), p.beta);
  const Matrix rho_final = prop.u * eta_i * prop.u.adjoint();

  Matrix target = Matrix::Zero(2, 2);
  target(0, 0) = p.target_probs[0];
  target(1, 1) = p.target_probs[1];

  diag.trace_distance_initial = trace_distance(reduced_system_state(eta_i, L), target);
  diag.trace_distance_to_target = trace_distance(reduced_system_state(rho_final, L), target);
  return diag;
}

}  // namespace fcs
