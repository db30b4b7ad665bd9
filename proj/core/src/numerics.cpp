#include "fcs/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fcs {

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

SpectralDecomposition hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("hermitian_eig: matrix must be square, dim >= 1");
  if (!is_hermitian(m))
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within 1e-12");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge at dim " +
                             std::to_string(m.rows()));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix apply_spectral_function(const Matrix& m,
                               const std::function<double(double)>& f) {
  return apply_spectral_function(m, [&f](double e) { return Complex(f(e), 0.0); });
}

Matrix apply_spectral_function(const Matrix& m,
                               const std::function<Complex(double)>& f) {
  return apply_spectral_function(hermitian_eig(m), f);
}

Matrix apply_spectral_function(const SpectralDecomposition& sd,
                               const std::function<Complex(double)>& f) {
  const auto n = sd.eigenvalues.size();
  Vector fe(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex v = f(sd.eigenvalues[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("apply_spectral_function: f non-finite at eigenvalue " +
                              std::to_string(sd.eigenvalues[i]));
    fe[i] = v;
  }
  return sd.eigenvectors * fe.asDiagonal() * sd.eigenvectors.adjoint();
}

double logdet_pos(const Matrix& m) {
  const auto sd = hermitian_eig(m);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double e = sd.eigenvalues[i];
    if (e <= 0.0)
      throw std::domain_error("logdet_pos: non-positive eigenvalue " + std::to_string(e) +
                              "; try a smaller alpha range");
    sum += std::log(e);
  }
  return sum;
}

std::vector<Complex> logdet_branch_tracked(const std::vector<Matrix>& family) {
  std::vector<Complex> out;
  out.reserve(family.size());
  double prev_imag = 0.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (const auto& m : family) {
    Eigen::PartialPivLU<Matrix> lu(m);
    Complex logdet(0.0, 0.0);
    const auto& lumat = lu.matrixLU();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      logdet += std::log(lumat(i, i));
    if (lu.permutationP().determinant() < 0)
      logdet += Complex(0.0, std::numbers::pi);
    if (!std::isfinite(logdet.real()))
      throw std::domain_error("logdet_branch_tracked: determinant underflow/overflow; "
                              "try a smaller alpha range");
    // unwrap the phase relative to the previous grid point
    double im = logdet.imag();
    while (im - prev_imag > std::numbers::pi) im -= two_pi;
    while (im - prev_imag < -std::numbers::pi) im += two_pi;
    prev_imag = im;
    out.emplace_back(logdet.real(), im);
  }
  return out;
}

Matrix repolarize(const Matrix& u) {
  const double drift = (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
                           .cwiseAbs()
                           .maxCoeff();
  if (drift >= 0.5)
    throw std::invalid_argument("repolarize: input too far from unitary, ‖u†u-1‖ = " +
                                std::to_string(drift));
  // Newton iteration for the polar factor, quadratically convergent for
  // inputs this close to unitary (much cheaper than an SVD).
  Matrix w = u;
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  double residual = drift;
  for (int it = 0; it < 20; ++it) {
    w = 0.5 * (w + w.inverse().adjoint());
    const double r = (w.adjoint() * w - id).cwiseAbs().maxCoeff();
    // stop at the round-off floor (quadratic convergence stalls there)
    if (r < 4.0 * std::numeric_limits<double>::epsilon() || r >= residual) return w;
    residual = r;
  }
  return w;
}

double von_neumann_entropy(const Matrix& rho) {
  const auto sd = hermitian_eig(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double p = sd.eigenvalues[i];
    if (p > kEigenvalueFloor) s -= p * std::log(p);
  }
  return s;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  const auto sd = hermitian_eig(a - b);
  return 0.5 * sd.eigenvalues.cwiseAbs().sum();
}

}  // namespace fcs
