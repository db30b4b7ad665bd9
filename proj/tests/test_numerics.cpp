#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fcs/numerics.hpp"

using namespace fcs;

namespace {

Matrix random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST_CASE("hermitian_eig on simple matrices") {
  const auto id3 = hermitian_eig(Matrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(id3.eigenvalues[i] == doctest::Approx(1.0));

  Matrix d(2, 2);
  d << 2.0, 0.0, 0.0, -1.0;
  const auto dd = hermitian_eig(d);
  CHECK(dd.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(dd.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(std::abs(dd.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(dd.eigenvectors(0, 1)) == doctest::Approx(1.0));

  const double g = 1.0, l = 0.5;
  Matrix h(2, 2);
  h << -g, -l, -l, g;
  const auto hd = hermitian_eig(h);
  CHECK(hd.eigenvalues[0] == doctest::Approx(-std::sqrt(1.25)).epsilon(1e-12));
  CHECK(hd.eigenvalues[1] == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
}

TEST_CASE("hermitian_eig rejects bad input") {
  CHECK_THROWS_AS(hermitian_eig(Matrix()), std::invalid_argument);
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("hermitian_eig reconstruction invariant") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const Matrix m = random_hermitian(17, seed);
    const auto sd = hermitian_eig(m);
    const Matrix rec =
        sd.eigenvectors * sd.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
        sd.eigenvectors.adjoint();
    const double norm = m.cwiseAbs().maxCoeff();
    CHECK((rec - m).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + norm));
    CHECK((sd.eigenvectors.adjoint() * sd.eigenvectors - Matrix::Identity(17, 17))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    for (int i = 0; i + 1 < 17; ++i) CHECK(sd.eigenvalues[i] <= sd.eigenvalues[i + 1]);
  }
}

TEST_CASE("apply_spectral_function basics") {
  const Matrix m = random_hermitian(6, 7u);
  const std::function<double(double)> ident = [](double e) { return e; };
  CHECK((apply_spectral_function(m, ident) - m).cwiseAbs().maxCoeff() <= 1e-10);

  const std::function<double(double)> ex = [](double e) { return std::exp(e); };
  CHECK((apply_spectral_function(Matrix::Zero(4, 4), ex) - Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::log(2.0);
  const Matrix e = apply_spectral_function(d, ex);
  CHECK(e(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_spectral_function reports non-finite values with the eigenvalue") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -3.0;
  const std::function<double(double)> f = [](double e) { return std::log(e); };
  CHECK_THROWS_AS(apply_spectral_function(d, f), std::domain_error);
}

TEST_CASE("exp(m) exp(-m) is the identity") {
  const Matrix m = random_hermitian(9, 11u);
  const std::function<double(double)> ep = [](double e) { return std::exp(e); };
  const std::function<double(double)> em = [](double e) { return std::exp(-e); };
  const Matrix prod = apply_spectral_function(m, ep) * apply_spectral_function(m, em);
  CHECK((prod - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("logdet_pos on simple matrices") {
  CHECK(logdet_pos(Matrix::Identity(5, 5)) == doctest::Approx(0.0));
  Matrix d(2, 2);
  d << 2.0, 0.0, 0.0, 3.0;
  CHECK(logdet_pos(d) == doctest::Approx(std::log(6.0)).epsilon(1e-12));

  // 1 + e^{-beta h} for a single mode at zero energy
  Matrix one = Matrix::Identity(1, 1) + Matrix::Identity(1, 1);
  CHECK(logdet_pos(one) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Matrix neg(1, 1);
  neg << -1.0;
  CHECK_THROWS_AS(logdet_pos(neg), std::domain_error);
}

TEST_CASE("logdet_pos is additive on commuting positive pairs") {
  const Matrix m = random_hermitian(8, 13u);
  const std::function<double(double)> f1 = [](double e) { return 1.5 + std::tanh(e) * 0.3; };
  const std::function<double(double)> f2 = [](double e) { return 2.0 + std::sin(e) * 0.5; };
  const Matrix a = apply_spectral_function(m, f1);
  const Matrix b = apply_spectral_function(m, f2);
  CHECK(logdet_pos(a * b) == doctest::Approx(logdet_pos(a) + logdet_pos(b)).epsilon(1e-9));
}

TEST_CASE("logdet_branch_tracked unwraps the phase continuously") {
  // determinant e^{i theta} walking past the principal-branch cut
  std::vector<Matrix> family;
  std::vector<double> thetas;
  for (int k = 0; k <= 12; ++k) {
    const double theta = 1.5 * std::numbers::pi * k / 12.0;
    thetas.push_back(theta);
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = std::exp(Complex(0.0, theta));
    family.push_back(m);
  }
  const auto logs = logdet_branch_tracked(family);
  for (std::size_t k = 0; k < logs.size(); ++k) {
    CHECK(logs[k].real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(logs[k].imag() == doctest::Approx(thetas[k]).epsilon(1e-10));
  }
}

TEST_CASE("repolarize") {
  const auto sd = hermitian_eig(random_hermitian(7, 17u));
  const Matrix u = apply_spectral_function(
      sd, [](double e) { return std::exp(Complex(0.0, e)); });
  CHECK((repolarize(u) - u).cwiseAbs().maxCoeff() <= 1e-12);

  const Matrix scaled = 1.001 * Matrix::Identity(4, 4);
  CHECK((repolarize(scaled) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);

  // small drift typical of an integrated propagator
  Matrix drifted = u + 1e-8 * random_hermitian(7, 19u);
  const Matrix fixed = repolarize(drifted);
  CHECK((fixed.adjoint() * fixed - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((fixed - u).cwiseAbs().maxCoeff() <= 1e-6);

  CHECK_THROWS_AS(repolarize(2.0 * Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("entropy and trace distance") {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 0.9;
  rho(1, 1) = 0.1;
  CHECK(von_neumann_entropy(rho) ==
        doctest::Approx(-0.9 * std::log(0.9) - 0.1 * std::log(0.1)).epsilon(1e-12));
  CHECK(von_neumann_entropy(0.5 * Matrix::Identity(2, 2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0));
  CHECK(trace_distance(rho, 0.5 * Matrix::Identity(2, 2)) == doctest::Approx(0.4).epsilon(1e-12));
}
