#ifndef FCS_MODEL_HPP
#define FCS_MODEL_HPP

#include <limits>
#include <string>
#include <vector>

#include "fcs/numerics.hpp"

namespace fcs {

enum class ScheduleKind {
  kDefault,  // lambda(s) = lambda_max sin²(pi s), gamma(s) = gamma(1)(3s²-2s³), eps(s) = 0
  kConstant, // frozen drive: lambda = lambda_max, gamma = gamma(1), eps = 0 (test aid)
  kFrozenCoupling, // lambda = lambda_max throughout, gamma ramps as in kDefault
};

ScheduleKind schedule_kind_from_string(const std::string& name);
std::string to_string(ScheduleKind kind);

/// One erasure experiment: inverse temperature, chain hopping, coupling
/// peak, target final spectrum and the drive schedules on [0,1].
///
/// Conventions: the larger probability p_1 sits on the sigma_z = +1
/// eigenvector; gamma(1) = log(p_2/p_1)/(2 beta); eps(s) = 0, so the
/// free-energy constants F_i, F_f are fixed by the endpoint Hamiltonians.
struct DriveProtocol {
  double beta = 1.0;
  double kappa = 1.0;
  double lambda_max = 0.5;
  std::vector<double> target_probs = {0.9, 0.1};  // descending, sum 1
  ScheduleKind schedule_kind = ScheduleKind::kDefault;
  double epsilon_offset = 0.0;  // constant shift of eps(s); physically inert

  /// Validates fields (probabilities positive, descending, summing to 1
  /// within 1e-12; kappa > 0; beta > 0). Throws on violation.
  void check() const;

  double epsilon(double s) const;
  double gamma(double s) const;
  double lambda(double s) const;

  /// Endpoint value gamma(1) = log(p_2/p_1) / (2 beta).
  double gamma_final() const;
  double free_energy_initial() const;  // F_i = -log(d)/beta
  double free_energy_final() const;    // F_f = log(p_1 p_2)/(2 beta) for d=2
};

struct ValidationIssue {
  bool is_error = false;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool passed() const;
  bool has_warnings() const;
  std::string summary() const;
};

struct TimescaleReport {
  double T_S = std::numeric_limits<double>::infinity();
  double T_m = std::numeric_limits<double>::infinity();
  double T_SR = std::numeric_limits<double>::infinity();
};

/// Discrete Laplacian on {1..L} with Dirichlet boundary conditions:
/// tridiagonal, 1 on the off-diagonals. L = 1 gives the 1x1 zero matrix.
Matrix build_laplacian(int L);

/// Closed-form spectrum {2 cos(k pi / (L+1))}, k = 1..L, descending in k.
std::vector<double> laplacian_spectrum(int L);

/// One-particle Friedrichs Hamiltonian on C ⊕ l²({1..L}); index 0 is the
/// impurity mode:
///   h(s) = (eps+gamma) I - 2 gamma |0⟩⟨0| - lambda (|0⟩⟨1| + |1⟩⟨0|) + kappa Δ.
Matrix one_particle_hamiltonian(const DriveProtocol& p, double s, int L);

/// Decoupled symbol 0 ⊕ kappa Δ: the initial-state Gibbs symbol and the
/// reservoir measurement symbol (the impurity level sits exactly at 0).
Matrix decoupled_symbol(const DriveProtocol& p, int L);

/// Boundary conditions, effective-coupling window 2 gamma(s) in (-2k, 2k)
/// on a dense s-grid, C¹ smoothness by finite differences. Coupling-window
/// and lambda_max = 0 problems are warnings, not errors.
ValidationReport validate_protocol(const DriveProtocol& p);

/// ΔF = F_f - F_i; for d = 2 this is log(2)/beta + log(p_1 p_2)/(2 beta).
double free_energy_difference(const DriveProtocol& p);

/// Order-of-magnitude time scales at epoch s: T_S = 1/|gamma|,
/// T_m = 1/lambda² (c = 1 convention), T_SR = 2^(L+1)/L.
TimescaleReport timescale_estimates(const DriveProtocol& p, double s, int L);

}  // namespace fcs

#endif
