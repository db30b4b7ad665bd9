#ifndef FCS_NUMERICS_HPP
#define FCS_NUMERICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace fcs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Floor applied to eigenvalues before logs and negative powers.
inline constexpr double kEigenvalueFloor = 1e-300;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending,
/// eigenvectors as unitary columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

/// Checks the Hermitian invariant max|m - m†| <= tol.
bool is_hermitian(const Matrix& m, double tol = 1e-12);

/// Full eigendecomposition of a Hermitian matrix. Throws if m is not
/// Hermitian within 1e-12 or the solver does not converge.
SpectralDecomposition hermitian_eig(const Matrix& m);

/// V diag(f(e)) V† for a real scalar function of the spectrum.
/// Throws if f is non-finite on an eigenvalue.
Matrix apply_spectral_function(const Matrix& m,
                               const std::function<double(double)>& f);

/// Same, for complex-valued functions of the spectrum (e.g. e^{i t e}).
Matrix apply_spectral_function(const Matrix& m,
                               const std::function<Complex(double)>& f);

/// Applies f to a precomputed decomposition; avoids re-diagonalizing
/// when several functions of the same matrix are needed.
Matrix apply_spectral_function(const SpectralDecomposition& sd,
                               const std::function<Complex(double)>& f);

/// log det(m) for a Hermitian positive-definite m, as the sum of the
/// logs of its eigenvalues. Throws when an eigenvalue is <= 0.
double logdet_pos(const Matrix& m);

/// Complex log-determinants of a family of matrices indexed by a grid,
/// with the branch of the log chosen by continuity along the grid. The
/// first entry anchors the branch (imaginary part nearest to zero).
std::vector<Complex> logdet_branch_tracked(const std::vector<Matrix>& family);

/// Projects a near-unitary matrix back onto the unitary group via its
/// polar factor. Requires ‖u†u - 1‖ < 0.5; throws on singular input.
Matrix repolarize(const Matrix& u);

/// von Neumann entropy -tr(rho log rho) in nats, eigenvalues clamped.
double von_neumann_entropy(const Matrix& rho);

/// Trace distance (1/2)‖a - b‖₁ between Hermitian matrices.
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace fcs

#endif
