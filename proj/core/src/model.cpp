#include "fcs/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fcs {

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "default" || name == "smoothstep") return ScheduleKind::kDefault;
  if (name == "constant") return ScheduleKind::kConstant;
  if (name == "frozen_coupling") return ScheduleKind::kFrozenCoupling;
  throw std::invalid_argument("unknown schedule_kind '" + name + "'");
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kDefault: return "default";
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kFrozenCoupling: return "frozen_coupling";
  }
  return "?";
}

void DriveProtocol::check() const {
  if (beta <= 0.0) throw std::invalid_argument("protocol: beta must be > 0");
  if (kappa <= 0.0) throw std::invalid_argument("protocol: kappa must be > 0");
  if (lambda_max < 0.0) throw std::invalid_argument("protocol: lambda_max must be >= 0");
  if (target_probs.size() != 2)
    throw std::invalid_argument("protocol: target_probs must have exactly 2 entries");
  double sum = 0.0;
  for (double p : target_probs) {
    if (p <= 0.0) throw std::invalid_argument("protocol: probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("protocol: probabilities must sum to 1");
  if (target_probs[0] < target_probs[1])
    throw std::invalid_argument("protocol: target_probs must be descending");
}

double DriveProtocol::epsilon(double) const { return epsilon_offset; }

double DriveProtocol::gamma_final() const {
  return std::log(target_probs[1] / target_probs[0]) / (2.0 * beta);
}

double DriveProtocol::gamma(double s) const {
  if (schedule_kind == ScheduleKind::kConstant) return gamma_final();
  return gamma_final() * (3.0 * s * s - 2.0 * s * s * s);
}

double DriveProtocol::lambda(double s) const {
  if (schedule_kind == ScheduleKind::kConstant ||
      schedule_kind == ScheduleKind::kFrozenCoupling)
    return lambda_max;
  const double sp = std::sin(std::numbers::pi * s);
  return lambda_max * sp * sp;
}

namespace {

// Free energy of the isolated two-level system at schedule time s,
// with levels epsilon(s) +/- gamma(s).
double system_free_energy(const DriveProtocol& p, double s) {
  const double g = p.gamma(s);
  return p.epsilon(s) -
         std::log(std::exp(-p.beta * g) + std::exp(p.beta * g)) / p.beta;
}

}  // namespace

double DriveProtocol::free_energy_initial() const {
  return system_free_energy(*this, 0.0);
}

double DriveProtocol::free_energy_final() const {
  return system_free_energy(*this, 1.0);
}

bool ValidationReport::passed() const {
  for (const auto& i : issues)
    if (i.is_error) return false;
  return true;
}

bool ValidationReport::has_warnings() const {
  for (const auto& i : issues)
    if (!i.is_error) return true;
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (issues.empty()) return "pass";
  for (const auto& i : issues)
    os << (i.is_error ? "error: " : "warning: ") << i.message << "\n";
  return os.str();
}

Matrix build_laplacian(int L) {
  if (L < 1) throw std::invalid_argument("build_laplacian: L must be >= 1");
  Matrix d = Matrix::Zero(L, L);
  for (int x = 0; x + 1 < L; ++x) {
    d(x, x + 1) = 1.0;
    d(x + 1, x) = 1.0;
  }
  return d;
}

std::vector<double> laplacian_spectrum(int L) {
  if (L < 1) throw std::invalid_argument("laplacian_spectrum: L must be >= 1");
  std::vector<double> eps(L);
  for (int k = 1; k <= L; ++k)
    eps[k - 1] = 2.0 * std::cos(k * std::numbers::pi / (L + 1));
  return eps;
}

Matrix one_particle_hamiltonian(const DriveProtocol& p, double s, int L) {
  p.check();
  const double eps = p.epsilon(s), g = p.gamma(s), lam = p.lambda(s);
  Matrix h = Matrix::Zero(L + 1, L + 1);
  h(0, 0) = eps - g;
  h(0, 1) = -lam;
  h(1, 0) = -lam;
  for (int x = 1; x <= L; ++x) h(x, x) = eps + g;
  for (int x = 1; x < L; ++x) {
    h(x, x + 1) += p.kappa;
    h(x + 1, x) += p.kappa;
  }
  return h;
}

Matrix decoupled_symbol(const DriveProtocol& p, int L) {
  Matrix h = Matrix::Zero(L + 1, L + 1);
  for (int x = 1; x < L; ++x) {
    h(x, x + 1) = p.kappa;
    h(x + 1, x) = p.kappa;
  }
  return h;
}

ValidationReport validate_protocol(const DriveProtocol& p) {
  p.check();  // malformed probability vectors etc. are hard errors
  ValidationReport rep;

  if (std::abs(p.lambda(0.0)) > 1e-12 || std::abs(p.lambda(1.0)) > 1e-12)
    rep.issues.push_back({true, "decoupling boundary condition lambda(0)=lambda(1)=0 violated"});
  if (std::abs(p.gamma(0.0)) > 1e-12)
    rep.issues.push_back({true, "H_S(0) is not a multiple of identity (gamma(0) != 0)"});

  // H_S(1) spectrum must match -log(p_k)/beta + F_f
  const double Ff =
      p.epsilon(1.0) +
      std::log(p.target_probs[0] * p.target_probs[1]) / (2.0 * p.beta);
  const double e_plus = p.epsilon(1.0) + p.gamma(1.0);   // sigma_z = +1 level
  const double e_minus = p.epsilon(1.0) - p.gamma(1.0);  // sigma_z = -1 level
  if (std::abs(e_plus - (-std::log(p.target_probs[0]) / p.beta + Ff)) > 1e-12 ||
      std::abs(e_minus - (-std::log(p.target_probs[1]) / p.beta + Ff)) > 1e-12)
    rep.issues.push_back({true, "H_S(1) spectrum does not match -log(p_k)/beta + F_f"});

  constexpr int kGrid = 512;
  bool coupling_ok = true;
  for (int i = 0; i <= kGrid; ++i) {
    const double s = static_cast<double>(i) / kGrid;
    if (std::abs(2.0 * p.gamma(s)) >= 2.0 * p.kappa) coupling_ok = false;
  }
  if (!coupling_ok)
    rep.issues.push_back(
        {false, "effective coupling violated: 2 gamma(s) leaves (-2 kappa, 2 kappa); "
                "no full relaxation (bound state), expected for very small erasure error"});

  if (p.lambda_max == 0.0)
    rep.issues.push_back({false, "no equilibration: T_m infinite at lambda = 0"});

  // C¹ smoothness probe: finite-difference derivatives must be bounded and
  // consistent across a step refinement.
  auto fd = [](auto&& f, double s, double h) { return (f(s + h) - f(s - h)) / (2.0 * h); };
  for (int i = 1; i < 32; ++i) {
    const double s = static_cast<double>(i) / 32.0;
    for (auto&& f : {std::function<double(double)>([&](double t) { return p.gamma(t); }),
                     std::function<double(double)>([&](double t) { return p.lambda(t); }),
                     std::function<double(double)>([&](double t) { return p.epsilon(t); })}) {
      const double d1 = fd(f, s, 1e-4), d2 = fd(f, s, 5e-5);
      if (!std::isfinite(d1) || std::abs(d1 - d2) > 1e-3 * (1.0 + std::abs(d1))) {
        rep.issues.push_back({true, "schedule not C1 near s = " + std::to_string(s)});
        break;
      }
    }
  }
  return rep;
}

double free_energy_difference(const DriveProtocol& p) {
  p.check();
  return p.free_energy_final() - p.free_energy_initial();
}

TimescaleReport timescale_estimates(const DriveProtocol& p, double s, int L) {
  TimescaleReport r;
  const double g = std::abs(p.gamma(s));
  const double lam = p.lambda(s);
  if (g > 0.0) r.T_S = 1.0 / g;
  if (lam != 0.0) r.T_m = 1.0 / (lam * lam);
  if (L >= 1) r.T_SR = std::pow(2.0, L + 1) / static_cast<double>(L);
  return r;
}

}  // namespace fcs
