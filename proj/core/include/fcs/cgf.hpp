#ifndef FCS_CGF_HPP
#define FCS_CGF_HPP

#include <complex>
#include <string>
#include <vector>

namespace fcs {

/// Sampled cumulant generating function alpha -> chi(alpha).
///
/// For a real grid the values are real (imaginary parts ~0) and the curve
/// is convex. With imaginary_axis set, alphas holds theta for alpha = i*theta
/// and values is the complex chi(i*theta) with branch continuity from 0.
struct CgfCurve {
  std::vector<double> alphas;
  std::vector<std::complex<double>> values;
  std::vector<bool> valid;           // per-point error markers
  bool imaginary_axis = false;
  std::string provenance;            // oracle | determinant | closed-form
  int L = 0;
  double T = 0.0;

  double value_at(double alpha, double tol = 1e-12) const;
  /// Largest violation of convexity by second divided differences
  /// (real grids only). Non-negative; 0 for perfectly convex data.
  double convexity_defect() const;
};

/// Probability atoms of a discrete heat (or work) distribution.
/// Values strictly increasing with gaps > bin_tol, probabilities
/// non-negative and summing to 1.
struct HeatDistribution {
  struct Atom {
    double value = 0.0;
    double prob = 0.0;
  };
  std::vector<Atom> atoms;
  double bin_tol = 1e-9;

  double mean() const;
  double variance() const;
  /// log sum_k p_k e^{-alpha q_k}
  double cgf(double alpha) const;
};

}  // namespace fcs

#endif
