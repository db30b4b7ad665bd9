#ifndef FCS_QUASIFREE_HPP
#define FCS_QUASIFREE_HPP

#include <vector>

#include "fcs/cgf.hpp"
#include "fcs/model.hpp"
#include "fcs/numerics.hpp"

namespace fcs {

/// Unitary solution of (1/T) i du/ds = h(s) u on [0,1] at the
/// one-particle level; (L+1)x(L+1).
struct OneParticlePropagator {
  Matrix u;
  double T = 0.0;
  int L = 0;
  int steps = 0;
  double max_drift = 0.0;  // worst ‖u†u - 1‖ seen before repolarization
};

/// Default step count max(4096, 64 T kappa), resolving the fastest
/// phase ~ ‖h‖ T.
int default_one_particle_steps(const DriveProtocol& p, double T);

/// 4th-order Runge-Kutta with midpoint Hamiltonian evaluations,
/// exploiting the tridiagonal structure of h(s); repolarized every 64
/// steps. Throws if the unitarity drift exceeds 1e-6 between
/// repolarizations.
OneParticlePropagator propagate_one_particle(const DriveProtocol& p, double T, int L,
                                             int steps = 0);

/// Heat CGF through the determinant formula
///   chi(a) = logdet(1 + e^{-a k} u e^{a k} e^{-b h_dec} u†) - logdet(1 + e^{-b h_dec})
/// with k = h_dec = 0 ⊕ kappa Δ. Real grids go through a branch-tracked
/// complex log-determinant anchored at alpha = 0; points where the
/// determinant loses positivity are flagged invalid, not fatal.
CgfCurve heat_cgf_determinant(const OneParticlePropagator& u, const DriveProtocol& p,
                              const std::vector<double>& alpha_grid,
                              bool imaginary_axis = false);

/// The same object as S_{alpha/beta}(eta_i | rho_1) evaluated Gaussian-wise
/// through a Hermitian Cholesky-style factorization (the module's central
/// self-check against heat_cgf_determinant). Requires alpha in [0, beta].
CgfCurve renyi_cgf_quasifree(const OneParticlePropagator& u, const DriveProtocol& p,
                             const std::vector<double>& alpha_grid);

/// <dQ> = tr(k (u n_0 u† - n_0)) with n_0 = (1 + e^{beta h_dec})^{-1}.
double expected_heat(const OneParticlePropagator& u, const DriveProtocol& p);

/// Reduced 2x2 system state implied by the propagated occupation of the
/// impurity mode, basis ordered (sigma_z = +1, sigma_z = -1).
Matrix final_reduced_system_state(const OneParticlePropagator& u, const DriveProtocol& p);

struct MixingTrace {
  std::vector<double> times;
  std::vector<double> deviations;  // occupation minus instantaneous Gibbs value
  double fitted_rate = 0.0;        // exponential decay rate of |deviation|
  bool recurrence_warning = false; // t_max beyond the ballistic return ~ L/(2 kappa)
};

/// Relaxation probe at a frozen epoch: evolves the decoupled initial
/// symbol under fixed h(s) and records the impurity-occupation deviation
/// from its instantaneous Gibbs value.
MixingTrace mixing_probe(const DriveProtocol& p, double s, int L, double t_max,
                         int site = 0, int samples = 200);

}  // namespace fcs

#endif
