#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "hmmwave/par.hpp"
#include "hmmwave/stencils.hpp"

namespace st = hmmwave::stencil;

namespace {

std::vector<double> random_field(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

std::vector<double> random_coef(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("serial and omp kernels agree bitwise") {
  const int n1 = 1537;  // deliberately not a multiple of the dot block size
  const int n2 = 67;
  const auto w1 = random_field(n1, 1);
  const auto wm1 = random_field(n1, 2);
  const auto c1 = random_coef(n1, 3);
  const auto w2 = random_field(n2 * n2, 4);
  const auto wm2 = random_field(n2 * n2, 5);
  const auto cx2 = random_coef(n2 * n2, 6);
  const auto cy2 = random_coef(n2 * n2, 7);
  const auto cxy2 = random_field(n2 * n2, 8);
  const double dx = 0.01, dt = 0.003;

  SUBCASE("lf_step_1d") {
    std::vector<double> a(n1), b(n1);
    st::serial::lf_step_1d(n1, wm1.data(), w1.data(), a.data(), c1.data(),
                           wm1.data(), dt, dx);
    st::omp::lf_step_1d(n1, wm1.data(), w1.data(), b.data(), c1.data(),
                        wm1.data(), dt, dx);
    CHECK(st::max_abs_diff(n1, a.data(), b.data()) == 0.0);
  }
  SUBCASE("lf_step_2d") {
    std::vector<double> a(n2 * n2), b(n2 * n2);
    st::serial::lf_step_2d(n2, wm2.data(), w2.data(), a.data(), cx2.data(),
                           cy2.data(), nullptr, dt, dx);
    st::omp::lf_step_2d(n2, wm2.data(), w2.data(), b.data(), cx2.data(),
                        cy2.data(), nullptr, dt, dx);
    CHECK(st::max_abs_diff(n2 * n2, a.data(), b.data()) == 0.0);
  }
  SUBCASE("div_flux_1d and 2d") {
    std::vector<double> a(n1), b(n1);
    st::serial::div_flux_1d(n1, a.data(), c1.data(), w1.data(), 0.7, dx, false);
    st::omp::div_flux_1d(n1, b.data(), c1.data(), w1.data(), 0.7, dx, false);
    CHECK(st::max_abs_diff(n1, a.data(), b.data()) == 0.0);

    std::vector<double> a2(n2 * n2), b2(n2 * n2);
    st::serial::div_flux_2d(n2, a2.data(), cx2.data(), cy2.data(), w2.data(),
                            0.3, -0.4, dx, false);
    st::omp::div_flux_2d(n2, b2.data(), cx2.data(), cy2.data(), w2.data(), 0.3,
                         -0.4, dx, false);
    CHECK(st::max_abs_diff(n2 * n2, a2.data(), b2.data()) == 0.0);

    st::serial::div_flux_cross_2d(n2, a2.data(), cxy2.data(), w2.data(), 0.3,
                                  -0.4, dx);
    st::omp::div_flux_cross_2d(n2, b2.data(), cxy2.data(), w2.data(), 0.3, -0.4,
                               dx);
    CHECK(st::max_abs_diff(n2 * n2, a2.data(), b2.data()) == 0.0);
  }
  SUBCASE("gradients") {
    std::vector<double> a(n1), b(n1);
    st::serial::grad_c_1d(n1, a.data(), w1.data(), dx);
    st::omp::grad_c_1d(n1, b.data(), w1.data(), dx);
    CHECK(st::max_abs_diff(n1, a.data(), b.data()) == 0.0);
    st::serial::grad4_1d(n1, a.data(), w1.data(), dx);
    st::omp::grad4_1d(n1, b.data(), w1.data(), dx);
    CHECK(st::max_abs_diff(n1, a.data(), b.data()) == 0.0);

    std::vector<double> ax(n2 * n2), ay(n2 * n2), bx(n2 * n2), by(n2 * n2);
    st::serial::grad_c_2d(n2, ax.data(), ay.data(), w2.data(), dx);
    st::omp::grad_c_2d(n2, bx.data(), by.data(), w2.data(), dx);
    CHECK(st::max_abs_diff(n2 * n2, ax.data(), bx.data()) == 0.0);
    CHECK(st::max_abs_diff(n2 * n2, ay.data(), by.data()) == 0.0);
  }
  SUBCASE("dot and reductions") {
    CHECK(st::serial::dot_blocked(n1, w1.data(), wm1.data()) ==
          st::omp::dot_blocked(n1, w1.data(), wm1.data()));
    CHECK(st::serial::max_abs(n1, w1.data()) == st::omp::max_abs(n1, w1.data()));
    std::vector<double> a = wm1, b = wm1;
    st::serial::acc_weighted(n1, a.data(), w1.data(), 0.37);
    st::omp::acc_weighted(n1, b.data(), w1.data(), 0.37);
    CHECK(st::max_abs_diff(n1, a.data(), b.data()) == 0.0);
  }
}

TEST_CASE("div_flux matches the hand stencil on a tiny grid") {
  // n = 4, constant slope only: out[i] = (c[i] - c[i-1]) * s / dx.
  const int n = 4;
  const std::vector<double> c{1.0, 2.0, 4.0, 8.0};
  std::vector<double> out(n);
  st::div_flux_1d(n, out.data(), c.data(), nullptr, 2.0, 0.5, false);
  CHECK(out[0] == doctest::Approx(2.0 * (1.0 - 8.0) / 0.5));
  CHECK(out[1] == doctest::Approx(2.0 * (2.0 - 1.0) / 0.5));
  CHECK(out[2] == doctest::Approx(2.0 * (4.0 - 2.0) / 0.5));
  CHECK(out[3] == doctest::Approx(2.0 * (8.0 - 4.0) / 0.5));
}

TEST_CASE("cross stencil is symmetric as an operator") {
  // <u, D v> == <D u, v> for the mixed-derivative part on a periodic grid.
  const int n = 16;
  const auto u = random_field(n * n, 11);
  const auto v = random_field(n * n, 12);
  const auto c = random_coef(n * n, 13);
  std::vector<double> du(n * n, 0.0), dv(n * n, 0.0);
  st::div_flux_cross_2d(n, dv.data(), c.data(), v.data(), 0.0, 0.0, 0.125);
  st::div_flux_cross_2d(n, du.data(), c.data(), u.data(), 0.0, 0.0, 0.125);
  const double a = st::dot_blocked(n * n, u.data(), dv.data());
  const double b = st::dot_blocked(n * n, v.data(), du.data());
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}
