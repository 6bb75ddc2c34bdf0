#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace hmmwave::media {

using Vec2 = std::array<double, 2>;

/// Symmetric d x d coefficient matrix, d <= 2. 1D fields use a11 only.
struct Mat {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;

  static Mat scalar(double a) { return {a, 0.0, a}; }
};

inline Vec2 mat_vec(const Mat& m, const Vec2& v, int dim) {
  if (dim == 1) return {m.a11 * v[0], 0.0};
  return {m.a11 * v[0] + m.a12 * v[1], m.a12 * v[0] + m.a22 * v[1]};
}

/// Eigenvalue range of a symmetric matrix (1D: the single entry).
void eigen_range(const Mat& m, int dim, double& lo, double& hi);

/// Locally periodic coefficient A(x, y): y-periodic on the unit cell with
/// smooth dependence on the slow variable x. Evaluation is pure; fields are
/// immutable after construction and safe to share across threads.
struct CoefficientField {
  int dim = 1;
  std::string label;
  double c1 = 0.0, c2 = 0.0;  // documented ellipticity bounds
  bool x_dependent = false;
  bool scalar = true;  // A = a(x,y) * I; enables the fast stencil path

  std::function<Mat(const Vec2& x, const Vec2& y)> eval;
  /// d A / d x_j, j = 0..dim-1 (analytic for catalog fields)
  std::function<std::array<Mat, 2>(const Vec2& x, const Vec2& y)> slow_grad;
  /// second slow derivatives (xx, xy, yy); empty when unavailable
  std::function<std::array<Mat, 3>(const Vec2& x, const Vec2& y)> slow_hess;
};

/// Central finite-difference fallback for slow_grad.
std::function<std::array<Mat, 2>(const Vec2&, const Vec2&)> fd_slow_grad(
    const CoefficientField& f, double h = 1e-5);

struct ValidationReport {
  bool ok = false;
  double c1_est = 0.0, c2_est = 0.0;
  double max_periodicity_violation = 0.0;
  double max_symmetry_violation = 0.0;  // structurally zero (symmetric storage)
  Vec2 bad_x{0, 0}, bad_y{0, 0};
  std::string message;
};

/// Samples A on a (samples x samples)^d grid in x and y, estimating the
/// Rayleigh-quotient range and the worst periodicity violation. Fails when
/// a sampled matrix is not positive definite. Requires samples >= 16.
ValidationReport validate(const CoefficientField& f, int samples);

/// Built-in coefficients. Known names:
///   constant            a * I (append ":a" to set the value, default 1)
///   periodic-1d         1.1 + (sin(0.1) + sin(2 pi y + 2)) / 2
///   locally-periodic-1d 1.1 + (sin(2 pi x + 0.1) + sin(2 pi y + 2)) / 2
///   locally-periodic-1d-simple  1.1 + (sin(2 pi x) + sin(2 pi y)) / 2
///   periodic-2d         (1.5 + sin(2 pi y1)) (1.5 + sin(2 pi y2)) I
///   locally-periodic-2d (1.5 + sin(2 pi y1) + sin(2 pi x2) cos(2 pi y1)) I
CoefficientField catalog(const std::string& name);

std::vector<std::string> catalog_names();

}  // namespace hmmwave::media
