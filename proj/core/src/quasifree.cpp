#include "fcs/quasifree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fcs {

namespace {

// y = -iT h(s) m, using the tridiagonal structure of h(s):
// diag (eps - gamma, eps + gamma, ...), first off-diagonal -lambda,
// remaining off-diagonals kappa.
void apply_generator(const DriveProtocol& p, double s, double T, const Matrix& m,
                     Matrix& y) {
  const int n = static_cast<int>(m.rows());
  const double eps = p.epsilon(s), g = p.gamma(s), lam = p.lambda(s), k = p.kappa;
  const Complex miT(0.0, -T);
  y.resize(n, m.cols());
  y.row(0) = miT * ((eps - g) * m.row(0) - lam * m.row(1));
  if (n > 1) {
    y.row(1) = miT * ((eps + g) * m.row(1) - lam * m.row(0));
    if (n > 2) y.row(1) += miT * k * m.row(2);
    for (int i = 2; i < n; ++i) {
      y.row(i) = miT * ((eps + g) * m.row(i) + k * m.row(i - 1));
      if (i + 1 < n) y.row(i) += miT * k * m.row(i + 1);
    }
  }
}

Matrix fermi_occupation(const Matrix& h, double beta) {
  const std::function<double(double)> f = [beta](double e) {
    return 1.0 / (1.0 + std::exp(beta * e));
  };
  return apply_spectral_function(h, f);
}

Matrix spectral_exp(const SpectralDecomposition& sd, double x) {
  Vector d(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = std::exp(x * sd.eigenvalues[i]);
  return sd.eigenvectors * d.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix spectral_exp_imag(const SpectralDecomposition& sd, double theta) {
  Vector d(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d[i] = std::exp(Complex(0.0, theta * sd.eigenvalues[i]));
  return sd.eigenvectors * d.asDiagonal() * sd.eigenvectors.adjoint();
}

}  // namespace

int default_one_particle_steps(const DriveProtocol& p, double T) {
  return std::max(4096, static_cast<int>(std::ceil(64.0 * T * p.kappa)));
}

OneParticlePropagator propagate_one_particle(const DriveProtocol& p, double T, int L,
                                             int steps) {
  p.check();
  if (L < 1) throw std::invalid_argument("propagate_one_particle: L must be >= 1");
  if (steps <= 0) steps = default_one_particle_steps(p, T);
  const int n = L + 1;
  const double ds = 1.0 / steps;

  OneParticlePropagator out;
  out.T = T;
  out.L = L;
  out.steps = steps;

  Matrix u = Matrix::Identity(n, n);
  Matrix k1, k2, k3, k4, tmp;
  for (int i = 0; i < steps; ++i) {
    const double s = i * ds;
    apply_generator(p, s, T, u, k1);
    tmp = u + (0.5 * ds) * k1;
    apply_generator(p, s + 0.5 * ds, T, tmp, k2);
    tmp = u + (0.5 * ds) * k2;
    apply_generator(p, s + 0.5 * ds, T, tmp, k3);
    tmp = u + ds * k3;
    apply_generator(p, s + ds, T, tmp, k4);
    u += (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((i + 1) % 64 == 0 || i + 1 == steps) {
      const double drift = (u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
      out.max_drift = std::max(out.max_drift, drift);
      if (drift > 1e-6)
        throw std::runtime_error("propagate_one_particle: unitarity drift " +
                                 std::to_string(drift) + " at step " + std::to_string(i + 1) +
                                 "; increase steps (currently " + std::to_string(steps) + ")");
      u = repolarize(u);
    }
  }
  out.u = std::move(u);
  return out;
}

CgfCurve heat_cgf_determinant(const OneParticlePropagator& prop, const DriveProtocol& p,
                              const std::vector<double>& alpha_grid, bool imaginary_axis) {
  p.check();
  const int n = prop.L + 1;
  const auto kd = hermitian_eig(decoupled_symbol(p, prop.L));
  const Matrix gibbs = spectral_exp(kd, -p.beta);  // e^{-beta h_dec}
  const double norm = logdet_pos(Matrix::Identity(n, n) + gibbs);

  CgfCurve curve;
  curve.provenance = "determinant";
  curve.imaginary_axis = imaginary_axis;
  curve.L = prop.L;
  curve.T = prop.T;
  curve.alphas = alpha_grid;
  curve.values.assign(alpha_grid.size(), Complex(0.0, 0.0));
  curve.valid.assign(alpha_grid.size(), true);

  auto matrix_at = [&](double a) {
    const Matrix conj_exp = imaginary_axis
                                ? (spectral_exp_imag(kd, -a) * prop.u * spectral_exp_imag(kd, a)).eval()
                                : (spectral_exp(kd, -a) * prop.u * spectral_exp(kd, a)).eval();
    return Matrix(Matrix::Identity(n, n) + conj_exp * gibbs * prop.u.adjoint());
  };

  // Branch continuity from alpha = 0: walk the non-negative part of the
  // grid upward and the negative part downward, each chain anchored at 0.
  std::vector<std::size_t> order(alpha_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return alpha_grid[a] < alpha_grid[b]; });
  const auto split = std::partition_point(order.begin(), order.end(),
                                          [&](std::size_t i) { return alpha_grid[i] < 0.0; });

  auto eval_chain = [&](const std::vector<std::size_t>& chain) {
    if (chain.empty()) return;
    std::vector<Matrix> family;
    family.push_back(matrix_at(0.0));  // anchor, logdet imaginary part ~ 0
    for (std::size_t idx : chain) family.push_back(matrix_at(alpha_grid[idx]));
    try {
      const auto logs = logdet_branch_tracked(family);
      for (std::size_t j = 0; j < chain.size(); ++j) {
        const Complex chi = logs[j + 1] - Complex(norm, 0.0);
        if (!imaginary_axis && std::abs(chi.imag()) > 1e-8) {
          curve.valid[chain[j]] = false;
          curve.values[chain[j]] = Complex(std::nan(""), 0.0);
        } else {
          curve.values[chain[j]] = imaginary_axis ? chi : Complex(chi.real(), 0.0);
        }
      }
    } catch (const std::exception&) {
      for (std::size_t idx : chain) {
        curve.valid[idx] = false;
        curve.values[idx] = Complex(std::nan(""), 0.0);
      }
    }
  };

  std::vector<std::size_t> down(order.begin(), split), up(split, order.end());
  std::reverse(down.begin(), down.end());
  eval_chain(up);
  eval_chain(down);
  return curve;
}

CgfCurve renyi_cgf_quasifree(const OneParticlePropagator& prop, const DriveProtocol& p,
                             const std::vector<double>& alpha_grid) {
  p.check();
  const int n = prop.L + 1;
  const auto kd = hermitian_eig(decoupled_symbol(p, prop.L));
  const double norm = logdet_pos(Matrix::Identity(n, n) + spectral_exp(kd, -p.beta));

  CgfCurve curve;
  curve.provenance = "determinant";
  curve.L = prop.L;
  curve.T = prop.T;
  curve.alphas = alpha_grid;
  for (double a : alpha_grid) {
    if (a < -1e-12 || a > p.beta + 1e-12)
      throw std::invalid_argument("renyi_cgf_quasifree: Renyi order alpha/beta = " +
                                  std::to_string(a / p.beta) + " outside [0, 1]");
    // S_{a/b}(eta_i | rho_1) = logdet(1 + C C†) - logdet(1 + e^{-b k}),
    // C = e^{-a k / 2} u e^{-(b - a) k / 2}
    const Matrix c = spectral_exp(kd, -0.5 * a) * prop.u * spectral_exp(kd, -0.5 * (p.beta - a));
    const double val = logdet_pos(Matrix::Identity(n, n) + c * c.adjoint()) - norm;
    curve.values.emplace_back(val, 0.0);
    curve.valid.push_back(true);
  }
  return curve;
}

double expected_heat(const OneParticlePropagator& prop, const DriveProtocol& p) {
  const Matrix k = decoupled_symbol(p, prop.L);
  const Matrix n0 = fermi_occupation(k, p.beta);
  return (k * (prop.u * n0 * prop.u.adjoint() - n0)).trace().real();
}

Matrix final_reduced_system_state(const OneParticlePropagator& prop, const DriveProtocol& p) {
  const Matrix k = decoupled_symbol(p, prop.L);
  const Matrix n0 = fermi_occupation(k, p.beta);
  const double occ = (prop.u * n0 * prop.u.adjoint())(0, 0).real();
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = 1.0 - occ;  // sigma_z = +1: impurity mode empty
  r(1, 1) = occ;
  return r;
}

MixingTrace mixing_probe(const DriveProtocol& p, double s, int L, double t_max, int site,
                         int samples) {
  p.check();
  if (site < 0 || site > L) throw std::invalid_argument("mixing_probe: site out of range");
  if (samples < 2) throw std::invalid_argument("mixing_probe: need at least 2 samples");

  // physical symbol: the (eps + gamma) shift only dephases globally but
  // would distort Gibbs occupations, so it is removed here
  Matrix h = one_particle_hamiltonian(p, s, L);
  h -= (p.epsilon(s) + p.gamma(s)) * Matrix::Identity(L + 1, L + 1);
  const auto hd = hermitian_eig(h);

  const Matrix n_dec = fermi_occupation(decoupled_symbol(p, L), p.beta);
  const double gibbs_occ =
      apply_spectral_function(hd, [&p](double e) {
        return Complex(1.0 / (1.0 + std::exp(p.beta * e)), 0.0);
      })(site, site)
          .real();

  const Matrix nt = hd.eigenvectors.adjoint() * n_dec * hd.eigenvectors;
  Matrix w(L + 1, L + 1);
  for (int j = 0; j <= L; ++j)
    for (int k = 0; k <= L; ++k)
      w(j, k) = hd.eigenvectors(site, j) * nt(j, k) * std::conj(hd.eigenvectors(site, k));

  MixingTrace trace;
  trace.recurrence_warning = t_max > L / (2.0 * p.kappa);
  for (int m = 0; m < samples; ++m) {
    const double t = t_max * m / (samples - 1);
    Complex occ(0.0, 0.0);
    for (int j = 0; j <= L; ++j)
      for (int k = 0; k <= L; ++k)
        occ += w(j, k) * std::exp(Complex(0.0, -t * (hd.eigenvalues[j] - hd.eigenvalues[k])));
    trace.times.push_back(t);
    trace.deviations.push_back(occ.real() - gibbs_occ);
  }

  // exponential fit of |deviation| over the initial decay window
  const double d0 = std::abs(trace.deviations.front());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double d = std::abs(trace.deviations[i]);
    if (d < std::max(1e-12, 0.01 * d0)) break;
    const double x = trace.times[i], y = std::log(d);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  if (count >= 2 && sxx * count - sx * sx > 0)
    trace.fitted_rate = -(sxy * count - sx * sy) / (sxx * count - sx * sx);
  return trace;
}

}  // namespace fcs
