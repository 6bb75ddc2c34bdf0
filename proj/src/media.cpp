#include "hmmwave/media.hpp"

#include <cmath>
#include <stdexcept>

namespace hmmwave::media {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void eigen_range(const Mat& m, int dim, double& lo, double& hi) {
  if (dim == 1) {
    lo = hi = m.a11;
    return;
  }
  const double mean = 0.5 * (m.a11 + m.a22);
  const double rad = std::sqrt(0.25 * (m.a11 - m.a22) * (m.a11 - m.a22) +
                               m.a12 * m.a12);
  lo = mean - rad;
  hi = mean + rad;
}

std::function<std::array<Mat, 2>(const Vec2&, const Vec2&)> fd_slow_grad(
    const CoefficientField& f, double h) {
  auto eval = f.eval;
  const int dim = f.dim;
  return [eval, dim, h](const Vec2& x, const Vec2& y) {
    std::array<Mat, 2> g{};
    for (int j = 0; j < dim; ++j) {
      Vec2 xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Mat ap = eval(xp, y), am = eval(xm, y);
      g[j].a11 = (ap.a11 - am.a11) / (2.0 * h);
      g[j].a12 = (ap.a12 - am.a12) / (2.0 * h);
      g[j].a22 = (ap.a22 - am.a22) / (2.0 * h);
    }
    return g;
  };
}

ValidationReport validate(const CoefficientField& f, int samples) {
  if (samples < 16)
    throw std::invalid_argument("validate requires >= 16 samples per axis");
  ValidationReport rep;
  rep.c1_est = 1e300;
  rep.c2_est = -1e300;
  const int sx = f.x_dependent ? samples : 1;
  const int d = f.dim;

  auto visit = [&](const Vec2& x, const Vec2& y) {
    const Mat a = f.eval(x, y);
    double lo, hi;
    eigen_range(a, d, lo, hi);
    if (lo < rep.c1_est) {
      rep.c1_est = lo;
      if (lo <= 0.0) {
        rep.bad_x = x;
        rep.bad_y = y;
      }
    }
    rep.c2_est = std::max(rep.c2_est, hi);
    for (int j = 0; j < d; ++j) {
      Vec2 ys = y;
      ys[j] += 1.0;
      const Mat as = f.eval(x, ys);
      const double viol = std::max({std::fabs(as.a11 - a.a11),
                                    std::fabs(as.a12 - a.a12),
                                    std::fabs(as.a22 - a.a22)});
      rep.max_periodicity_violation =
          std::max(rep.max_periodicity_violation, viol);
    }
  };

  Vec2 x{0, 0}, y{0, 0};
  for (int i0 = 0; i0 < sx; ++i0) {
    x[0] = double(i0) / sx;
    for (int i1 = 0; i1 < (d == 2 ? sx : 1); ++i1) {
      x[1] = double(i1) / sx;
      for (int j0 = 0; j0 < samples; ++j0) {
        y[0] = double(j0) / samples;
        if (d == 1) {
          visit(x, y);
        } else {
          for (int j1 = 0; j1 < samples; ++j1) {
            y[1] = double(j1) / samples;
            visit(x, y);
          }
        }
      }
    }
  }

  rep.ok = rep.c1_est > 0.0;
  if (!rep.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "coefficient not positive definite at x=(%g,%g) y=(%g,%g): "
                  "min eigenvalue %g",
                  rep.bad_x[0], rep.bad_x[1], rep.bad_y[0], rep.bad_y[1],
                  rep.c1_est);
    rep.message = buf;
  }
  return rep;
}

namespace {

CoefficientField scalar_field(int dim, std::string label, double c1, double c2,
                              bool xdep,
                              std::function<double(const Vec2&, const Vec2&)> a,
                              std::function<double(const Vec2&, const Vec2&)> dax1,
                              std::function<double(const Vec2&, const Vec2&)> dax2,
                              std::function<double(const Vec2&, const Vec2&)> hxx = {},
                              std::function<double(const Vec2&, const Vec2&)> hxy = {},
                              std::function<double(const Vec2&, const Vec2&)> hyy = {}) {
  CoefficientField f;
  f.dim = dim;
  f.label = std::move(label);
  f.c1 = c1;
  f.c2 = c2;
  f.x_dependent = xdep;
  f.scalar = true;
  f.eval = [a](const Vec2& x, const Vec2& y) { return Mat::scalar(a(x, y)); };
  f.slow_grad = [dax1, dax2](const Vec2& x, const Vec2& y) {
    std::array<Mat, 2> g{};
    if (dax1) g[0] = Mat::scalar(dax1(x, y));
    if (dax2) g[1] = Mat::scalar(dax2(x, y));
    return g;
  };
  if (hxx || hxy || hyy) {
    f.slow_hess = [hxx, hxy, hyy](const Vec2& x, const Vec2& y) {
      std::array<Mat, 3> h{};
      if (hxx) h[0] = Mat::scalar(hxx(x, y));
      if (hxy) h[1] = Mat::scalar(hxy(x, y));
      if (hyy) h[2] = Mat::scalar(hyy(x, y));
      return h;
    };
  }
  return f;
}

}  // namespace

CoefficientField catalog(const std::string& name) {
  const double r0 = 0.1;

  if (name.rfind("constant", 0) == 0) {
    double a = 1.0;
    if (auto pos = name.find(':'); pos != std::string::npos)
      a = std::stod(name.substr(pos + 1));
    if (!(a > 0.0)) throw std::invalid_argument("constant coefficient must be positive");
    auto f = scalar_field(
        1, name, a, a, false,
        [a](const Vec2&, const Vec2&) { return a; },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [](const Vec2&, const Vec2&) { return 0.0; });
    return f;
  }
  if (name == "constant-2d") {
    auto f = catalog("constant");
    f.dim = 2;
    f.label = name;
    return f;
  }
  if (name == "periodic-1d") {
    return scalar_field(
        1, name, 0.6, 1.7, false,
        [r0](const Vec2&, const Vec2& y) {
          return 1.1 + 0.5 * (std::sin(r0) + std::sin(kTwoPi * y[0] + 2.0));
        },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [](const Vec2&, const Vec2&) { return 0.0; });
  }
  if (name == "locally-periodic-1d") {
    return scalar_field(
        1, name, 0.1, 2.1, true,
        [r0](const Vec2& x, const Vec2& y) {
          return 1.1 + 0.5 * (std::sin(kTwoPi * x[0] + r0) +
                              std::sin(kTwoPi * y[0] + 2.0));
        },
        [r0](const Vec2& x, const Vec2&) {
          return 0.5 * kTwoPi * std::cos(kTwoPi * x[0] + r0);
        },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [r0](const Vec2& x, const Vec2&) {
          return -0.5 * kTwoPi * kTwoPi * std::sin(kTwoPi * x[0] + r0);
        });
  }
  if (name == "locally-periodic-1d-simple") {
    return scalar_field(
        1, name, 0.1, 2.1, true,
        [](const Vec2& x, const Vec2& y) {
          return 1.1 + 0.5 * (std::sin(kTwoPi * x[0]) + std::sin(kTwoPi * y[0]));
        },
        [](const Vec2& x, const Vec2&) {
          return 0.5 * kTwoPi * std::cos(kTwoPi * x[0]);
        },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [](const Vec2& x, const Vec2&) {
          return -0.5 * kTwoPi * kTwoPi * std::sin(kTwoPi * x[0]);
        });
  }
  if (name == "periodic-2d") {
    return scalar_field(
        2, name, 0.25, 6.25, false,
        [](const Vec2&, const Vec2& y) {
          return (1.5 + std::sin(kTwoPi * y[0])) * (1.5 + std::sin(kTwoPi * y[1]));
        },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [](const Vec2&, const Vec2&) { return 0.0; });
  }
  if (name == "locally-periodic-2d") {
    return scalar_field(
        2, name, 0.08, 2.92, true,
        [](const Vec2& x, const Vec2& y) {
          return 1.5 + std::sin(kTwoPi * y[0]) +
                 std::sin(kTwoPi * x[1]) * std::cos(kTwoPi * y[0]);
        },
        [](const Vec2&, const Vec2&) { return 0.0; },
        [](const Vec2& x, const Vec2& y) {
          return kTwoPi * std::cos(kTwoPi * x[1]) * std::cos(kTwoPi * y[0]);
        });
  }
  throw std::invalid_argument("unknown coefficient '" + name +
                              "'; known: constant[:a], periodic-1d, "
                              "locally-periodic-1d, locally-periodic-1d-simple, "
                              "periodic-2d, locally-periodic-2d");
}

std::vector<std::string> catalog_names() {
  return {"constant",      "periodic-1d",
          "locally-periodic-1d", "locally-periodic-1d-simple",
          "periodic-2d",   "locally-periodic-2d"};
}

}  // namespace hmmwave::media
