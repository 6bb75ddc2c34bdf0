#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hmmwave/kernels.hpp"
#include "hmmwave/rates.hpp"

using hmmwave::kernels::Kernel;
using hmmwave::kernels::periodic_average_error;

namespace {

// Composite Simpson on [-1,1]; independent of the Kernel quadrature path.
double simpson_moment(const Kernel& k, int r, int intervals) {
  const double h = 2.0 / intervals;
  auto f = [&](double x) { return k.eval(x) * std::pow(x, r); };
  double s = f(-1.0) + f(1.0);
  for (int i = 1; i < intervals; ++i)
    s += f(-1.0 + i * h) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

double simpson_average(const Kernel& k, double eta, double eps, int intervals) {
  const double h = 2.0 * eta / intervals;
  auto f = [&](double x) {
    return k.eval_scaled(eta, x) * std::sin(2.0 * M_PI * x / eps);
  };
  double s = f(-eta) + f(eta);
  for (int i = 1; i < intervals; ++i)
    s += f(-eta + i * h) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("moment conditions hold for the constructed kernels") {
  for (auto [p, q] : {std::pair{1, 0}, {3, 2}, {3, 6}, {5, 4}, {5, 6}}) {
    CAPTURE(p);
    CAPTURE(q);
    const Kernel k(p, q);
    CHECK(std::fabs(k.moment_exact(0) - 1.0) < 1e-12);
    for (int r = 1; r <= p; ++r) CHECK(std::fabs(k.moment_exact(r)) < 1e-12);
    // Independent quadrature sees the same moments.
    CHECK(simpson_moment(k, 0, 40000) == doctest::Approx(1.0).epsilon(1e-8));
    for (int r = 1; r <= p; ++r)
      CHECK(std::fabs(simpson_moment(k, r, 40000)) < 1e-8);
  }
}

TEST_CASE("p is sharp: the next even moment does not vanish") {
  const Kernel k(3, 2);
  CHECK(std::fabs(simpson_moment(k, 4, 40000)) > 1e-6);
  CHECK(std::fabs(k.moment_exact(4)) > 1e-6);
  CHECK(k.moment_exact(4) == doctest::Approx(simpson_moment(k, 4, 40000)));
}

TEST_CASE("boundary derivatives vanish up to order q") {
  for (auto [p, q] : {std::pair{1, 0}, {3, 2}, {3, 6}, {5, 4}}) {
    const Kernel k(p, q);
    for (int m = 0; m <= q; ++m) {
      CHECK(std::fabs(k.deriv(1.0, m)) < 1e-10);
      CHECK(std::fabs(k.deriv(-1.0, m)) < 1e-10);
    }
    // Order q+1 is the first nonzero one at the boundary.
    CHECK(std::fabs(k.deriv(1.0, q + 1)) > 1e-8);
  }
}

TEST_CASE("interior derivative matches finite differences") {
  const Kernel k(3, 4);
  const double h = 1e-5;
  for (double x : {-0.7, -0.2, 0.3, 0.8}) {
    const double fd = (k.eval(x + h) - k.eval(x - h)) / (2 * h);
    CHECK(k.deriv(x, 1) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("scaled kernel keeps support and mass") {
  const Kernel k(3, 2);
  CHECK(k.eval_scaled(0.25, 0.25) == 0.0);
  CHECK(k.eval_scaled(0.25, -0.3) == 0.0);
  CHECK(k.eval_scaled(1.0, 0.37) == doctest::Approx(k.eval(0.37)));
  for (double eta : {0.03, 0.4, 1.7}) {
    // trapezoid of K_eta over its support
    const int n = 20001;
    const double h = 2.0 * eta / (n - 1);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      s += w * k.eval_scaled(eta, -eta + i * h);
    }
    CHECK(s * h == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("moment() quadrature agrees with the closed form") {
  const Kernel k(5, 4);
  CHECK(k.moment(0, 10000) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(k.moment(2, 10000)) < 1e-9);
  CHECK(k.moment(6, 10001) == doctest::Approx(k.moment_exact(6)).epsilon(1e-7));
}

TEST_CASE("periodic averages: constants and the decay rate") {
  const Kernel k(3, 2);
  // Constant function equals its mean.
  CHECK(periodic_average_error(k, 0.01, 0.001, [](double) { return 3.7; }) <
        1e-12);

  // Zero-mean oscillation decays at rate q+2 in eps/eta.
  auto f = [](double t) { return std::sin(2.0 * M_PI * t); };
  std::vector<double> alphas, errs;
  for (int j = 1; j <= 4; ++j) {
    const double eps = 0.01 * std::pow(2.0, -j);
    alphas.push_back(eps / 0.01);
    errs.push_back(periodic_average_error(k, 0.01, eps, f));
  }
  const auto fit = hmmwave::rates::fit_loglog(alphas, errs);
  CHECK(fit.slope >= k.q() + 1.5);

  // Value at eps = eta against an independent Simpson quadrature.
  const double direct = std::fabs(simpson_average(k, 0.01, 0.01, 200000));
  CHECK(periodic_average_error(k, 0.01, 0.01, f) ==
        doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("constructor rejects invalid orders") {
  CHECK_THROWS(Kernel(0, 2));
  CHECK_THROWS(Kernel(3, -1));
}
