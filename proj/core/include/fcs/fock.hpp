#ifndef FCS_FOCK_HPP
#define FCS_FOCK_HPP

#include <utility>
#include <vector>

#include "fcs/cgf.hpp"
#include "fcs/model.hpp"
#include "fcs/numerics.hpp"

namespace fcs {

/// Exact many-body engine on the full 2^(L+1)-dimensional Fock space.
/// Tensor ordering is fixed: mode 0 is the system (impurity) qubit,
/// modes 1..L the chain sites; basis index bit j holds the occupation
/// of mode j. The sigma_z = +1 system state is the empty impurity mode
/// (bit 0 clear), so the target eigenvector of p_1 is basis state 0.
///
/// Exponential in L; hard-capped at L <= 10 (dimension 2048) unless
/// explicitly overridden.
inline constexpr int kFockHardCap = 10;

int fock_dimension(int L);

/// Jordan-Wigner annihilator for mode j (sign strings over modes < j).
Matrix jw_annihilator(int L, int mode);

/// Second quantization dGamma(m) of a one-particle matrix on modes 0..L.
Matrix quadratic_many_body(const Matrix& m, int L);

/// Reservoir Hamiltonian: second quantization of kappa * Laplacian on
/// chain modes 1..L (zero on the impurity mode).
Matrix reservoir_hamiltonian(const DriveProtocol& p, int L);

/// Rotating-wave coupling between the impurity mode and chain site 1,
/// normalized so that lambda * V matches the one-particle symbol's
/// -lambda coupling entries.
Matrix coupling_operator(int L);

/// H(s) = H_S(s) ⊗ 1 + 1 ⊗ H_R + lambda(s) V on the Fock space, with
/// H_S(s) = eps(s) + gamma(s) sigma_z and sigma_z = 1 - 2 n_0.
Matrix fock_hamiltonian(const DriveProtocol& p, double s, int L,
                        bool override_cap = false);

/// System Hamiltonian term alone (acting on the full space).
Matrix fock_system_hamiltonian(const DriveProtocol& p, double s, int L);

/// e^{-beta H} / tr(e^{-beta H}), evaluated after an internal energy
/// shift. Throws if the result is non-finite even after shifting.
Matrix gibbs_state(const Matrix& h, double beta);

/// Partial trace over the chain: the reduced 2x2 system state, basis
/// ordered (sigma_z = +1, sigma_z = -1).
Matrix reduced_system_state(const Matrix& rho, int L);

struct FockPropagation {
  Matrix u;                     // unitary propagator at s = 1
  int steps = 0;
  double max_drift = 0.0;       // worst ‖u†u - 1‖ seen before repolarization
  double estimated_error = 0.0; // Richardson probe of the global error
  bool step_warning = false;    // estimated error above 1e-8
};

/// Integrates (1/T) i dU/ds = H(s) U with a 4th-order Runge-Kutta scheme
/// on s in [0,1], repolarizing every 64 steps. steps <= 0 picks the
/// default max(4096, 64 T kappa).
FockPropagation propagate_fock(const DriveProtocol& p, double T, int L,
                               int steps = 0, bool override_cap = false);

/// Eigenprojections of a Hermitian operator with eigenvalues grouped
/// within tol; returned as (eigenvalue, column range) over the rotated
/// basis, plus the rotation.
struct SpectralProjections {
  std::vector<double> energies;
  std::vector<std::pair<int, int>> column_ranges;  // [begin, end)
  Matrix basis;                                    // unitary, columns sorted
};
SpectralProjections grouped_projections(const Matrix& h, double tol = 1e-10);

struct FcsResult {
  HeatDistribution distribution;
  CgfCurve cgf;
};

/// Two-time measurement statistics of H_R: measure at s=0, evolve by u,
/// measure at s=1. Requires [eta_i, H_R] = 0 within 1e-10. The CGF is
/// built from the distribution and cross-checked against the direct
/// trace formula log tr(e^{-a H_R} U e^{a H_R} eta U†) within 1e-9.
FcsResult heat_fcs_oracle(const Matrix& u, const Matrix& eta_i,
                          const Matrix& h_reservoir,
                          const std::vector<double>& alpha_grid);

/// log tr(rho^alpha sigma^(1-alpha)) for alpha in (0,1].
double renyi_relative_entropy(const Matrix& rho, const Matrix& sigma,
                              double alpha);

/// Work statistics from successive measurements of H(0) and H(1);
/// cross-checked against -alpha dF + S_{alpha/beta}(eta_f | rho_1).
FcsResult work_fcs_oracle(const DriveProtocol& p, double T, int L,
                          const std::vector<double>& alpha_grid,
                          int steps = 0);

/// Heat statistics conditioned on a final system measurement projecting
/// onto psi (a unit vector in C²). Throws if the success probability is
/// below 1e-12.
FcsResult success_fcs_oracle(const DriveProtocol& p, double T, int L,
                             const std::vector<double>& alpha_grid,
                             const Eigen::Vector2cd& psi, int steps = 0);

/// Same with an arbitrary system-space projector (identity recovers the
/// unconditional statistics).
FcsResult conditional_heat_fcs(const Matrix& u, const Matrix& eta_i,
                               const Matrix& h_reservoir,
                               const Matrix& system_projector, int L,
                               const std::vector<double>& alpha_grid);

}  // namespace fcs

#endif
