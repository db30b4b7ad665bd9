#include "fcs/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fcs {

namespace {

double parity_sign(unsigned bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

void check_cap(int L, bool override_cap) {
  if (L < 1) throw std::invalid_argument("fock: L must be >= 1");
  if (L > kFockHardCap && !override_cap) {
    const double gib = std::pow(2.0, 2 * (L + 1)) * 16.0 / (1 << 30);
    throw std::invalid_argument("fock: L = " + std::to_string(L) +
                                " exceeds the hard cap " + std::to_string(kFockHardCap) +
                                " (a dense propagator needs ~" + std::to_string(gib) +
                                " GiB); use the quasifree engine or override the cap");
  }
}

}  // namespace

int fock_dimension(int L) { return 1 << (L + 1); }

Matrix jw_annihilator(int L, int mode) {
  check_cap(L, true);
  if (mode < 0 || mode > L) throw std::invalid_argument("jw_annihilator: mode out of range");
  const int n = fock_dimension(L);
  const unsigned below = (1u << mode) - 1u;
  Matrix a = Matrix::Zero(n, n);
  for (int b = 0; b < n; ++b) {
    if (b & (1 << mode))
      a(b ^ (1 << mode), b) = parity_sign(static_cast<unsigned>(b) & below);
  }
  return a;
}

Matrix quadratic_many_body(const Matrix& m, int L) {
  if (m.rows() != L + 1 || m.cols() != L + 1)
    throw std::invalid_argument("quadratic_many_body: symbol must be (L+1)x(L+1)");
  const int n = fock_dimension(L);
  Matrix h = Matrix::Zero(n, n);
  for (int b = 0; b < n; ++b) {
    for (int k = 0; k <= L; ++k) {
      if (!(b & (1 << k))) continue;
      const int b1 = b ^ (1 << k);
      const double s1 = parity_sign(static_cast<unsigned>(b) & ((1u << k) - 1u));
      for (int j = 0; j <= L; ++j) {
        if (m(j, k) == Complex(0.0, 0.0)) continue;
        if (b1 & (1 << j)) continue;
        const int b2 = b1 | (1 << j);
        const double s2 = parity_sign(static_cast<unsigned>(b1) & ((1u << j) - 1u));
        h(b2, b) += m(j, k) * s1 * s2;
      }
    }
  }
  return h;
}

Matrix reservoir_hamiltonian(const DriveProtocol& p, int L) {
  Matrix sym = Matrix::Zero(L + 1, L + 1);
  for (int x = 1; x < L; ++x) {
    sym(x, x + 1) = p.kappa;
    sym(x + 1, x) = p.kappa;
  }
  return quadratic_many_body(sym, L);
}

Matrix coupling_operator(int L) {
  Matrix sym = Matrix::Zero(L + 1, L + 1);
  sym(0, 1) = -1.0;
  sym(1, 0) = -1.0;
  return quadratic_many_body(sym, L);
}

Matrix fock_system_hamiltonian(const DriveProtocol& p, double s, int L) {
  const int n = fock_dimension(L);
  const double eps = p.epsilon(s), g = p.gamma(s);
  Matrix h = Matrix::Zero(n, n);
  for (int b = 0; b < n; ++b) {
    const double sz = (b & 1) ? -1.0 : 1.0;  // sigma_z = 1 - 2 n_0
    h(b, b) = eps + g * sz;
  }
  return h;
}

Matrix fock_hamiltonian(const DriveProtocol& p, double s, int L, bool override_cap) {
  p.check();
  check_cap(L, override_cap);
  return fock_system_hamiltonian(p, s, L) + reservoir_hamiltonian(p, L) +
         p.lambda(s) * coupling_operator(L);
}

Matrix gibbs_state(const Matrix& h, double beta) {
  const auto sd = hermitian_eig(h);
  const double e_min = sd.eigenvalues.minCoeff();
  RealVector w(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w[i] = std::exp(-beta * (sd.eigenvalues[i] - e_min));
  const double z = w.sum();
  if (!std::isfinite(z) || z <= 0.0)
    throw std::runtime_error("gibbs_state: partition function non-finite even after the "
                             "internal energy shift; rescale beta or the Hamiltonian");
  w /= z;
  return sd.eigenvectors * w.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix reduced_system_state(const Matrix& rho, int L) {
  const int n = fock_dimension(L);
  if (rho.rows() != n) throw std::invalid_argument("reduced_system_state: dimension mismatch");
  Matrix r = Matrix::Zero(2, 2);
  for (int c = 0; c < (n >> 1); ++c)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) += rho(i + 2 * c, j + 2 * c);
  return r;
}

namespace {

struct FockTerms {
  Matrix h_r;
  Matrix v;
  RealVector sz;  // diagonal of sigma_z ⊗ 1
};

FockTerms make_terms(const DriveProtocol& p, int L) {
  const int n = fock_dimension(L);
  FockTerms t{reservoir_hamiltonian(p, L), coupling_operator(L), RealVector(n)};
  for (int b = 0; b < n; ++b) t.sz[b] = (b & 1) ? -1.0 : 1.0;
  return t;
}

Matrix assemble(const FockTerms& t, const DriveProtocol& p, double s) {
  Matrix h = t.h_r + p.lambda(s) * t.v;
  const double eps = p.epsilon(s), g = p.gamma(s);
  for (Eigen::Index b = 0; b < t.sz.size(); ++b) h(b, b) += eps + g * t.sz[b];
  return h;
}

int default_fock_steps(const DriveProtocol& p, double T) {
  return std::max(4096, static_cast<int>(std::ceil(64.0 * T * p.kappa)));
}

// One RK4 step of dU/ds = -iT H(s) U using H at s, s+h/2, s+h.
Matrix rk4_step(const Matrix& u, const Matrix& h0, const Matrix& hm, const Matrix& h1,
                double T, double ds) {
  const Complex miT(0.0, -T);
  const Matrix k1 = miT * (h0 * u);
  const Matrix k2 = miT * (hm * (u + (0.5 * ds) * k1));
  const Matrix k3 = miT * (hm * (u + (0.5 * ds) * k2));
  const Matrix k4 = miT * (h1 * (u + ds * k3));
  return u + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

FockPropagation propagate_fock(const DriveProtocol& p, double T, int L, int steps,
                               bool override_cap) {
  p.check();
  check_cap(L, override_cap);
  if (steps <= 0) steps = default_fock_steps(p, T);
  const int n = fock_dimension(L);
  const FockTerms terms = make_terms(p, L);
  const double ds = 1.0 / steps;

  FockPropagation out;
  out.steps = steps;

  // Richardson probe at mid-protocol: one step vs two half steps.
  {
    const Matrix id = Matrix::Identity(n, n);
    const double s0 = 0.5;
    const Matrix ha = assemble(terms, p, s0);
    const Matrix hb = assemble(terms, p, s0 + 0.25 * ds);
    const Matrix hm = assemble(terms, p, s0 + 0.5 * ds);
    const Matrix hc = assemble(terms, p, s0 + 0.75 * ds);
    const Matrix hd = assemble(terms, p, s0 + ds);
    const Matrix full = rk4_step(id, ha, hm, hd, T, ds);
    const Matrix half = rk4_step(rk4_step(id, ha, hb, hm, T, 0.5 * ds), hm, hc, hd, T, 0.5 * ds);
    const double local = (full - half).cwiseAbs().maxCoeff() * 16.0 / 15.0;
    out.estimated_error = local * steps;
    out.step_warning = out.estimated_error > 1e-8;
  }

  Matrix u = Matrix::Identity(n, n);
  Matrix h_next = assemble(terms, p, 0.0);
  for (int i = 0; i < steps; ++i) {
    const double s = i * ds;
    const Matrix h0 = std::move(h_next);
    const Matrix hm = assemble(terms, p, s + 0.5 * ds);
    h_next = assemble(terms, p, s + ds);
    u = rk4_step(u, h0, hm, h_next, T, ds);
    if ((i + 1) % 64 == 0 || i + 1 == steps) {
      const double drift =
          (u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
      out.max_drift = std::max(out.max_drift, drift);
      u = repolarize(u);
    }
  }
  out.u = std::move(u);
  return out;
}

SpectralProjections grouped_projections(const Matrix& h, double tol) {
  const auto sd = hermitian_eig(h);
  SpectralProjections out;
  out.basis = sd.eigenvectors;
  int begin = 0;
  for (int i = 1; i <= sd.eigenvalues.size(); ++i) {
    if (i == sd.eigenvalues.size() || sd.eigenvalues[i] - sd.eigenvalues[i - 1] > tol) {
      double e = 0.0;
      for (int j = begin; j < i; ++j) e += sd.eigenvalues[j];
      out.energies.push_back(e / (i - begin));
      out.column_ranges.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

namespace {

HeatDistribution bin_atoms(std::vector<std::pair<double, double>> raw, double bin_tol) {
  std::sort(raw.begin(), raw.end());
  HeatDistribution dist;
  dist.bin_tol = bin_tol;
  for (const auto& [v, pr] : raw) {
    if (pr < -1e-10) throw std::runtime_error("fcs: negative probability " + std::to_string(pr));
    const double q = std::max(pr, 0.0);
    if (!dist.atoms.empty() && v - dist.atoms.back().value <= bin_tol) {
      auto& a = dist.atoms.back();
      const double tot = a.prob + q;
      if (tot > 0.0) a.value = (a.value * a.prob + v * q) / tot;
      a.prob = tot;
    } else {
      dist.atoms.push_back({v, q});
    }
  }
  // drop numerically forbidden transitions (exact zeros polluted by round-off)
  std::erase_if(dist.atoms,
                [](const HeatDistribution::Atom& a) { return a.prob <= 1e-14; });
  return dist;
}

// Two-time measurement statistics of h_initial at s=0 and h_final at s=1,
// optionally conditioned on a projector commuting with h_final. Also
// returns the data needed for the direct-trace CGF cross-check.
struct TwoTimeData {
  HeatDistribution dist;
  double denom = 1.0;  // success probability of the conditioning
  // tr(e^{-a h_final} u e^{a h_initial} eta u† P) = sum_ij W(i,j) e^{a(Ei_j - Ef_i)}
  Matrix weights;
  RealVector e_final;
  RealVector e_initial;
};

TwoTimeData two_time_statistics(const Matrix& u, const Matrix& eta, const Matrix& h_initial,
                                const Matrix& h_final, const Matrix* projector,
                                double bin_tol = 1e-9) {
  const double comm =
      (eta * h_initial - h_initial * eta).cwiseAbs().maxCoeff();
  if (comm > 1e-10 * (1.0 + h_initial.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "two_time_statistics: initial state does not commute with the first measured "
        "observable (protocol violates the decoupling boundary conditions)");

  const auto pi = grouped_projections(h_initial);
  const auto pf = grouped_projections(h_final);
  const Matrix ut = pf.basis.adjoint() * u * pi.basis;           // final-basis x initial-basis
  const Matrix eta_i = pi.basis.adjoint() * eta * pi.basis;
  Matrix proj_f;
  if (projector) proj_f = pf.basis.adjoint() * (*projector) * pf.basis;

  const int n = static_cast<int>(u.rows());
  std::vector<std::pair<double, double>> raw;
  raw.reserve(pi.energies.size() * pf.energies.size());
  double denom = 0.0;
  for (std::size_t a = 0; a < pi.energies.size(); ++a) {
    const auto [b0, b1] = pi.column_ranges[a];
    const Matrix ua = ut.middleCols(b0, b1 - b0);
    const Matrix za = ua * eta_i.block(b0, b0, b1 - b0, b1 - b0);
    RealVector per_row(n);
    if (projector) {
      const Matrix x = za * ua.adjoint();
      per_row = x.cwiseProduct(proj_f.transpose()).rowwise().sum().real();
    } else {
      per_row = za.cwiseProduct(ua.conjugate()).rowwise().sum().real();
    }
    for (std::size_t b = 0; b < pf.energies.size(); ++b) {
      const auto [c0, c1] = pf.column_ranges[b];
      double prob = 0.0;
      for (int i = c0; i < c1; ++i) prob += per_row[i];
      denom += prob;
      raw.emplace_back(pf.energies[b] - pi.energies[a], prob);
    }
  }
  if (projector) {
    if (denom <= 1e-12)
      throw std::runtime_error("conditional statistics: success probability " +
                               std::to_string(denom) + " is numerically zero");
    for (auto& [v, pr] : raw) pr /= denom;
  }

  TwoTimeData out;
  out.dist = bin_atoms(std::move(raw), bin_tol);
  out.denom = projector ? denom : 1.0;

  // direct-trace weights: W(i,j) = ut(i,j) * (eta_i ut† P)(j,i)
  Matrix rhs = eta_i * ut.adjoint();
  if (projector) rhs = rhs * proj_f;
  out.weights = ut.cwiseProduct(rhs.transpose());
  RealVector ef(n), ei(n);
  for (std::size_t b = 0; b < pf.energies.size(); ++b)
    for (int i = pf.column_ranges[b].first; i < pf.column_ranges[b].second; ++i)
      ef[i] = pf.energies[b];
  for (std::size_t a = 0; a < pi.energies.size(); ++a)
    for (int j = pi.column_ranges[a].first; j < pi.column_ranges[a].second; ++j)
      ei[j] = pi.energies[a];
  out.e_final = ef;
  out.e_initial = ei;
  return out;
}

double direct_trace_cgf(const TwoTimeData& d, double alpha) {
  Complex tr(0.0, 0.0);
  const int n = static_cast<int>(d.weights.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      tr += d.weights(i, j) * std::exp(alpha * (d.e_initial[j] - d.e_final[i]));
  return std::log(tr.real() / d.denom);
}

CgfCurve cgf_from_distribution(const HeatDistribution& dist,
                               const std::vector<double>& alpha_grid,
                               const TwoTimeData& cross_check) {
  CgfCurve curve;
  curve.provenance = "oracle";
  curve.alphas = alpha_grid;
  for (double a : alpha_grid) {
    const double chi = dist.cgf(a);
    const double direct = direct_trace_cgf(cross_check, a);
    if (std::abs(chi - direct) > 1e-9)
      throw std::runtime_error("fcs oracle: distribution CGF and direct trace disagree by " +
                               std::to_string(std::abs(chi - direct)) + " at alpha = " +
                               std::to_string(a));
    curve.values.emplace_back(chi, 0.0);
    curve.valid.push_back(true);
  }
  return curve;
}

}  // namespace

FcsResult heat_fcs_oracle(const Matrix& u, const Matrix& eta_i, const Matrix& h_reservoir,
                          const std::vector<double>& alpha_grid) {
  const auto data = two_time_statistics(u, eta_i, h_reservoir, h_reservoir, nullptr);
  return {data.dist, cgf_from_distribution(data.dist, alpha_grid, data)};
}

double renyi_relative_entropy(const Matrix& rho, const Matrix& sigma, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("renyi_relative_entropy: order must lie in (0,1]");
  auto power = [](const Matrix& m, double a) {
    const std::function<double(double)> f = [a](double e) {
      return std::pow(std::max(e, kEigenvalueFloor), a);
    };
    return apply_spectral_function(m, f);
  };
  const Complex tr = (power(rho, alpha) * power(sigma, 1.0 - alpha)).trace();
  return std::log(tr.real());
}

FcsResult work_fcs_oracle(const DriveProtocol& p, double T, int L,
                          const std::vector<double>& alpha_grid, int steps) {
  const Matrix h0 = fock_hamiltonian(p, 0.0, L);
  const Matrix h1 = fock_hamiltonian(p, 1.0, L);
  const Matrix eta_i = gibbs_state(h0, p.beta);
  const Matrix u = propagate_fock(p, T, L, steps).u;

  const auto data = two_time_statistics(u, eta_i, h0, h1, nullptr);
  CgfCurve curve;
  curve.provenance = "oracle";
  curve.alphas = alpha_grid;
  curve.L = L;
  curve.T = T;

  const Matrix eta_f = gibbs_state(h1, p.beta);
  const Matrix rho_1 = u * eta_i * u.adjoint();
  const double dF = free_energy_difference(p);
  for (double a : alpha_grid) {
    const double chi = data.dist.cgf(a);
    if (a > 0.0 && a <= p.beta) {
      const double via_renyi = -a * dF + renyi_relative_entropy(eta_f, rho_1, a / p.beta);
      if (std::abs(chi - via_renyi) > 1e-9)
        throw std::runtime_error("work_fcs_oracle: two-time CGF and Renyi route disagree by " +
                                 std::to_string(std::abs(chi - via_renyi)) + " at alpha = " +
                                 std::to_string(a));
    }
    curve.values.emplace_back(chi, 0.0);
    curve.valid.push_back(true);
  }
  return {data.dist, curve};
}

FcsResult conditional_heat_fcs(const Matrix& u, const Matrix& eta_i,
                               const Matrix& h_reservoir, const Matrix& system_projector,
                               int L, const std::vector<double>& alpha_grid) {
  if (system_projector.rows() != 2 || system_projector.cols() != 2)
    throw std::invalid_argument("conditional_heat_fcs: projector must act on the 2-dim system");
  const int n = fock_dimension(L);
  Matrix proj = Matrix::Zero(n, n);
  for (int c = 0; c < (n >> 1); ++c)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) proj(i + 2 * c, j + 2 * c) = system_projector(i, j);

  const auto data = two_time_statistics(u, eta_i, h_reservoir, h_reservoir, &proj);
  CgfCurve curve;
  curve.provenance = "oracle";
  curve.alphas = alpha_grid;
  for (double a : alpha_grid) {
    const double chi = data.dist.cgf(a);
    const double direct = direct_trace_cgf(data, a);
    if (std::abs(chi - direct) > 1e-9)
      throw std::runtime_error("conditional_heat_fcs: CGF routes disagree at alpha = " +
                               std::to_string(a));
    curve.values.emplace_back(chi, 0.0);
    curve.valid.push_back(true);
  }
  return {data.dist, curve};
}

FcsResult success_fcs_oracle(const DriveProtocol& p, double T, int L,
                             const std::vector<double>& alpha_grid,
                             const Eigen::Vector2cd& psi, int steps) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("success_fcs_oracle: psi must be a unit vector");
  const Matrix h0 = fock_hamiltonian(p, 0.0, L);
  const Matrix eta_i = gibbs_state(h0, p.beta);
  const Matrix h_r = reservoir_hamiltonian(p, L);
  const Matrix u = propagate_fock(p, T, L, steps).u;
  const Matrix proj = psi * psi.adjoint();
  auto result = conditional_heat_fcs(u, eta_i, h_r, proj, L, alpha_grid);
  result.cgf.L = L;
  result.cgf.T = T;
  return result;
}

}  // namespace fcs
