#include "fcs/cgf.hpp"

#include <cmath>
#include <stdexcept>

namespace fcs {

double CgfCurve::value_at(double alpha, double tol) const {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (std::abs(alphas[i] - alpha) <= tol) {
      if (!valid.empty() && !valid[i])
        throw std::runtime_error("CgfCurve: point at alpha flagged invalid");
      return values[i].real();
    }
  }
  throw std::out_of_range("CgfCurve: alpha not on grid");
}

double CgfCurve::convexity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < alphas.size(); ++i) {
    if (!valid.empty() && !(valid[i - 1] && valid[i] && valid[i + 1])) continue;
    const double h1 = alphas[i] - alphas[i - 1];
    const double h2 = alphas[i + 1] - alphas[i];
    const double second =
        2.0 * (values[i + 1].real() / (h2 * (h1 + h2)) - values[i].real() / (h1 * h2) +
               values[i - 1].real() / (h1 * (h1 + h2)));
    if (-second > worst) worst = -second;
  }
  return worst;
}

double HeatDistribution::mean() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.value * a.prob;
  return m;
}

double HeatDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& a : atoms) v += (a.value - m) * (a.value - m) * a.prob;
  return v;
}

double HeatDistribution::cgf(double alpha) const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.prob * std::exp(-alpha * a.value);
  return std::log(s);
}

}  // namespace fcs
