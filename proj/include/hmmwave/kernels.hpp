#pragma once

#include <functional>
#include <vector>

namespace hmmwave::kernels {

/// Averaging kernel K in the space K^{p,q}: supported on [-1,1], C^q after
/// extension by zero, unit mass and p vanishing moments. Constructed as
/// K(x) = P(x) (1-x^2)^{q+1} with P an even polynomial of degree <= p whose
/// coefficients solve the moment conditions. Immutable after construction.
class Kernel {
 public:
  Kernel(int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }

  /// Full monomial coefficients of K on [-1,1] (index = power of x).
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// K(x); zero for |x| >= 1. Evaluated in the factored form, which stays
  /// accurate near the support boundary.
  double eval(double x) const;

  /// m-th derivative of K at x (m >= 0). For m <= q the value at x = +-1 is
  /// an exact zero: every term carries a positive power of (1 - x^2).
  double deriv(double x, int m) const;

  /// Scaled kernel K_eta(x) = K(x/eta) / eta, supported on [-eta, eta].
  double eval_scaled(double eta, double x) const;

  /// Closed-form moment  int K(t) t^r dt  from the monomial coefficients.
  double moment_exact(int r) const;

  /// Composite-trapezoid moment with quad_points nodes on [-1,1].
  double moment(int r, int quad_points) const;

 private:
  int p_ = 0;
  int q_ = 0;
  std::vector<double> pcoeffs_;  // even polynomial P, index = power of x
  std::vector<double> gcoeffs_;  // (1-x^2)^{q+1}, integer coefficients
  std::vector<double> coeffs_;   // product, full monomial basis
};

/// |(K_eta * f(./eps))(0) - mean(f)| for a 1-periodic f, by composite
/// trapezoid with at least 32 nodes per eps-period of the integrand.
/// Requires 0 < eps <= eta.
double periodic_average_error(const Kernel& k, double eta, double eps,
                              const std::function<double(double)>& f);

/// Mean of a 1-periodic function over the unit cell (rectangle rule).
double periodic_mean(const std::function<double(double)>& f, int pts = 8192);

}  // namespace hmmwave::kernels
