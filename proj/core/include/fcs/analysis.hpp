#ifndef FCS_ANALYSIS_HPP
#define FCS_ANALYSIS_HPP

#include <optional>
#include <vector>

#include "fcs/cgf.hpp"
#include "fcs/model.hpp"
#include "fcs/numerics.hpp"

namespace fcs {

/// Spectrum of the target state of a d-level erasure: eigenvalues p_k
/// with multiplicities m_k, sum m_k p_k = 1. Everything downstream of
/// the adiabatic limit (heat quanta, cumulants, singular families) is a
/// function of this data alone.
struct LimitSpec {
  int d = 2;
  std::vector<double> probs;
  std::vector<int> multiplicities;
  double beta = 1.0;
  double erasure_error = 0.0;  // epsilon, when the spec comes from the epsilon family

  void check() const;

  /// d = 2, spectrum (p1, p2), multiplicities (1, 1).
  static LimitSpec two_level(double p1, double p2, double beta);
  /// Largest eigenvalue 1 - eps, remaining mass split evenly over d - 1 levels.
  static LimitSpec from_erasure_error(double eps, int d, double beta);
  static LimitSpec from_protocol(const DriveProtocol& p);

  double entropy() const;       // S = -sum m_k p_k log p_k (nats)
  double entropy_drop() const;  // log d - S
};

struct LandauerReport {
  double mean_heat = 0.0;
  double entropy_drop = 0.0;        // dS = S(rho_i) - S(rho_f)
  double entropy_production = 0.0;  // sigma = beta <dQ> - dS
  bool bound_satisfied = false;     // sigma >= -1e-8
  double saturation_gap = 0.0;      // distance from equality in the bound
};

/// Quasi-static heat CGF: chi(a) = -(a/b) log d + log sum_k m_k p_k^(1 - a/b).
CgfCurve limiting_cgf(const LimitSpec& spec, const std::vector<double>& alpha_grid);

/// Quantized heat values Q_k = (log d + log p_k) / beta carrying
/// probability m_k p_k; the mean is entropy_drop / beta exactly.
HeatDistribution heat_atoms(const LimitSpec& spec);

/// n-th heat cumulant in the quasi-static limit. n = 1 is
/// entropy_drop / beta; n >= 2 come from derivatives of
/// log sum_k m_k p_k^g at g = 1, scaled by beta^(-n).
double closed_form_cumulants(const LimitSpec& spec, int n);

/// (-1)^n d^n chi / d a^n at a = 0 by 4th-order central differences.
/// Requires the grid to contain a symmetric stencil around 0 (7 points
/// for n <= 4). Throws if the stencil is unavailable or n > 4.
double numeric_cumulants(const CgfCurve& curve, int n);

/// CGF of the singular erasure family: largest eigenvalue 1 - eps, the
/// rest split evenly. Requires eps in (0, 1/2).
CgfCurve epsilon_family_cgf(double eps, int d, double beta,
                            const std::vector<double>& alpha_grid);

/// CGF conditioned on successful erasure: the exact line
/// chi(a) = -(a/b)(log d + log(1 - eps)), eps in [0, 1).
CgfCurve success_limit_cgf(double eps, int d, double beta,
                           const std::vector<double>& alpha_grid);

/// Entropy balance of a single run from its mean heat and the reduced
/// system states at the endpoints.
LandauerReport landauer_report(double mean_heat, const Matrix& initial_reduced_state,
                               const Matrix& final_reduced_state, double beta);

struct ConvergenceCell {
  int L = 0;
  double T = 0.0;
  double sup_alpha_error = 0.0;      // sup over the grid of |chi - chi_limit|
  double entropy_production = 0.0;   // sigma of the run
  double mean_heat = 0.0;
  bool valid = true;
};

struct ConvergenceStudy {
  std::vector<ConvergenceCell> cells;  // L-major, T-minor ordering
  bool monotone_at_largest_L = false;  // sup error strictly decreasing in T
};

/// Quasi-free engine sweep over (L, T) cells against the quasi-static
/// CGF. Cells are independent; `workers` threads fill a preallocated
/// table, so results do not depend on the worker count.
ConvergenceStudy convergence_study(const DriveProtocol& p, const std::vector<int>& L_list,
                                   const std::vector<double>& T_list,
                                   const std::vector<double>& alpha_grid, int workers = 1);

struct WrongOrderDiagnostic {
  int L = 0;
  double T = 0.0;
  double trace_distance_to_target = 0.0;  // distance of rho_sys(1) from diag(p1, p2)
  double trace_distance_initial = 0.0;    // same distance at s = 0, for scale
};

/// Exact-engine demonstration that the adiabatic limit at *fixed* L does
/// not perform erasure: at small L and very large T the reduced system
/// state stays pinned near its initial populations instead of reaching
/// diag(p1, p2). Intended for L <= 4 and a frozen-coupling schedule.
WrongOrderDiagnostic wrong_order_diagnostic(const DriveProtocol& p, int L, double T,
                                            int steps = 0);

}  // namespace fcs

#endif
