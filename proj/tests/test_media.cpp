#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hmmwave/media.hpp"

using namespace hmmwave::media;

TEST_CASE("catalog fields validate with the documented bounds") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    const auto f = catalog(name);
    const auto rep = validate(f, 32);
    CHECK(rep.ok);
    CHECK(rep.c1_est >= f.c1 - 1e-9);
    CHECK(rep.c2_est <= f.c2 + 1e-9);
    CHECK(rep.max_periodicity_violation < 1e-12);
    CHECK(rep.max_symmetry_violation == 0.0);
  }
}

TEST_CASE("identity coefficient has c1 = c2 = 1") {
  const auto f = catalog("constant");
  const auto rep = validate(f, 16);
  CHECK(rep.c1_est == doctest::Approx(1.0));
  CHECK(rep.c2_est == doctest::Approx(1.0));
}

TEST_CASE("locally periodic 1d stays in [0.1, 2.1]") {
  const auto f = catalog("locally-periodic-1d");
  const auto rep = validate(f, 64);
  CHECK(rep.c1_est >= 0.1);
  CHECK(rep.c2_est <= 2.1);
}

TEST_CASE("sign-changing coefficient fails validation naming the point") {
  CoefficientField bad;
  bad.dim = 1;
  bad.label = "bad";
  bad.x_dependent = false;
  bad.eval = [](const Vec2&, const Vec2& y) {
    return Mat::scalar(std::sin(2.0 * M_PI * y[0]));
  };
  bad.slow_grad = [](const Vec2&, const Vec2&) { return std::array<Mat, 2>{}; };
  const auto rep = validate(bad, 32);
  CHECK(!rep.ok);
  CHECK(rep.c1_est <= 0.0);
  CHECK(!rep.message.empty());
}

TEST_CASE("validate enforces the sample floor") {
  CHECK_THROWS(validate(catalog("constant"), 8));
}

TEST_CASE("analytic slow gradients match finite differences") {
  for (const auto& name : {"locally-periodic-1d", "locally-periodic-1d-simple",
                           "locally-periodic-2d"}) {
    CAPTURE(name);
    const auto f = catalog(name);
    const auto fd = fd_slow_grad(f, 1e-4);
    for (double x1 : {0.0, 0.17, 0.6}) {
      for (double y1 : {0.05, 0.4, 0.81}) {
        const Vec2 x{x1, 0.33}, y{y1, 0.72};
        const auto ga = f.slow_grad(x, y);
        const auto gn = fd(x, y);
        for (int j = 0; j < f.dim; ++j) {
          const double scale = std::max(1.0, std::fabs(gn[j].a11));
          CHECK(std::fabs(ga[j].a11 - gn[j].a11) / scale < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("second slow derivative matches finite differences of slow_grad") {
  const auto f = catalog("locally-periodic-1d");
  REQUIRE(bool(f.slow_hess));
  const double h = 1e-4;
  const Vec2 y{0.3, 0};
  for (double x1 : {0.1, 0.45}) {
    const double num = (f.slow_grad({x1 + h, 0}, y)[0].a11 -
                        f.slow_grad({x1 - h, 0}, y)[0].a11) /
                       (2 * h);
    CHECK(f.slow_hess({x1, 0}, y)[0].a11 == doctest::Approx(num).epsilon(1e-6));
  }
}

TEST_CASE("unknown catalog name throws with the known list") {
  CHECK_THROWS_WITH_AS(catalog("no-such-field"),
                       doctest::Contains("unknown coefficient"),
                       std::invalid_argument);
}

TEST_CASE("constant catalog entry accepts a scale") {
  const auto f = catalog("constant:2.5");
  CHECK(f.eval({0, 0}, {0.3, 0}).a11 == doctest::Approx(2.5));
  CHECK_THROWS(catalog("constant:-1"));
}

TEST_CASE("eigen_range reproduces 2x2 eigenvalues") {
  Mat m{2.0, 0.5, 1.0};
  double lo, hi;
  eigen_range(m, 2, lo, hi);
  // analytic: mean 1.5, radius sqrt(0.25 + 0.25)
  CHECK(lo == doctest::Approx(1.5 - std::sqrt(0.5)));
  CHECK(hi == doctest::Approx(1.5 + std::sqrt(0.5)));
}
