#include "hmmwave/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hmmwave::kernels {

namespace {

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * double(n - i) / double(i + 1);
  return b;
}

// int_{-1}^{1} x^{2m} (1-x^2)^{q+1} dx = B(m + 1/2, q + 2)
double even_weight_moment(int m, int q) {
  return std::beta(m + 0.5, double(q + 2));
}

// Dense Gaussian elimination with partial pivoting; the moment systems are
// tiny (order <= 5) and well conditioned.
std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                std::vector<double> b) {
  const int n = int(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0)
      throw std::runtime_error("kernel moment system is singular");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double m = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

// Value of the m-th derivative of a monomial-coefficient polynomial at x.
double poly_deriv_at(const std::vector<double>& c, int m, double x) {
  const int deg = int(c.size()) - 1;
  if (m > deg) return 0.0;
  double val = 0.0;
  for (int k = deg; k >= m; --k) {
    double fac = 1.0;
    for (int i = 0; i < m; ++i) fac *= double(k - i);
    val = val * x + fac * c[k];
  }
  return val;
}

}  // namespace

Kernel::Kernel(int p, int q) : p_(p), q_(q) {
  if (p < 1 || q < 0) throw std::invalid_argument("Kernel requires p >= 1, q >= 0");

  // Even ansatz: odd moments vanish by symmetry, the even moments up to p
  // give a square system for the even coefficients of P.
  const int nun = p / 2 + 1;
  std::vector<std::vector<double>> mat(nun, std::vector<double>(nun));
  std::vector<double> rhs(nun, 0.0);
  rhs[0] = 1.0;
  for (int i = 0; i < nun; ++i)
    for (int j = 0; j < nun; ++j) mat[i][j] = even_weight_moment(i + j, q);
  const std::vector<double> c = solve_dense(std::move(mat), std::move(rhs));

  pcoeffs_.assign(2 * (nun - 1) + 1, 0.0);
  for (int j = 0; j < nun; ++j) pcoeffs_[2 * j] = c[j];

  gcoeffs_.assign(2 * (q + 1) + 1, 0.0);
  for (int k = 0; k <= q + 1; ++k)
    gcoeffs_[2 * k] = binom(q + 1, k) * ((k % 2) ? -1.0 : 1.0);

  coeffs_.assign(pcoeffs_.size() + gcoeffs_.size() - 1, 0.0);
  for (std::size_t a = 0; a < pcoeffs_.size(); ++a)
    for (std::size_t b = 0; b < gcoeffs_.size(); ++b)
      coeffs_[a + b] += pcoeffs_[a] * gcoeffs_[b];
}

double Kernel::eval(double x) const {
  if (std::fabs(x) >= 1.0) return 0.0;
  const double x2 = x * x;
  double pv = 0.0;
  for (int k = int(pcoeffs_.size()) - 1; k >= 0; k -= 2) pv = pv * x2 + pcoeffs_[k];
  const double base = (1.0 - x) * (1.0 + x);
  double g = 1.0;
  for (int i = 0; i < q_ + 1; ++i) g *= base;
  return pv * g;
}

double Kernel::deriv(double x, int m) const {
  if (std::fabs(x) > 1.0) return 0.0;
  if (m == 0) return eval(x);
  // Leibniz on the factored form. The derivatives of (1-x^2)^{q+1} are
  // evaluated from its integer monomial coefficients, which makes the
  // values at x = +-1 exact zeros up to order q.
  double val = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double gi = poly_deriv_at(gcoeffs_, i, x);
    if (gi == 0.0) continue;
    const double pj = poly_deriv_at(pcoeffs_, m - i, x);
    val += binom(m, i) * pj * gi;
  }
  return val;
}

double Kernel::eval_scaled(double eta, double x) const {
  if (eta <= 0.0) throw std::invalid_argument("eval_scaled requires eta > 0");
  return eval(x / eta) / eta;
}

double Kernel::moment_exact(int r) const {
  double s = 0.0;
  for (int k = int(coeffs_.size()) - 1; k >= 0; --k) {
    if ((k + r) % 2) continue;  // odd integrand
    s += coeffs_[k] * 2.0 / double(k + r + 1);
  }
  return s;
}

double Kernel::moment(int r, int quad_points) const {
  if (quad_points < 2) throw std::invalid_argument("moment needs >= 2 nodes");
  const double h = 2.0 / double(quad_points - 1);
  double s = 0.0;
  for (int i = 0; i < quad_points; ++i) {
    const double x = -1.0 + i * h;
    const double w = (i == 0 || i == quad_points - 1) ? 0.5 : 1.0;
    s += w * eval(x) * std::pow(x, r);
  }
  return s * h;
}

double periodic_mean(const std::function<double(double)>& f, int pts) {
  double s = 0.0;
  for (int i = 0; i < pts; ++i) s += f((i + 0.5) / pts);
  return s / pts;
}

double periodic_average_error(const Kernel& k, double eta, double eps,
                              const std::function<double(double)>& f) {
  if (!(eps > 0.0) || !(eta > 0.0) || eps > eta)
    throw std::invalid_argument("periodic_average_error requires 0 < eps <= eta");
  const double fbar = periodic_mean(f);
  // >= 32 nodes per eps-period across the support [-eta, eta].
  long long pts = llround(std::ceil(2.0 * eta / eps)) * 32 + 1;
  if (pts < 513) pts = 513;
  const double h = 2.0 * eta / double(pts - 1);
  double s = 0.0;
  for (long long i = 0; i < pts; ++i) {
    const double t = -eta + double(i) * h;
    const double w = (i == 0 || i == pts - 1) ? 0.5 : 1.0;
    s += w * k.eval_scaled(eta, t) * f(t / eps);
  }
  s *= h;
  return std::fabs(s - fbar);
}

}  // namespace hmmwave::kernels
