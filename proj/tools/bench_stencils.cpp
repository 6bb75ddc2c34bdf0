// Timing comparison between the serial reference kernels and the OpenMP
// drivers, plus one end-to-end micro solve in each mode.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "hmmwave/kernels.hpp"
#include "hmmwave/media.hpp"
#include "hmmwave/micro.hpp"
#include "hmmwave/par.hpp"
#include "hmmwave/stencils.hpp"

namespace st = hmmwave::stencil;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds(clock_type::time_point a, clock_type::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename Fn>
double time_loop(int reps, Fn&& fn) {
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) fn();
  return seconds(t0, clock_type::now()) / reps;
}

void report(const char* name, double t_serial, double t_omp) {
  std::printf("%-24s %12.3f ms %12.3f ms %8.2fx\n", name, 1e3 * t_serial,
              1e3 * t_omp, t_serial / t_omp);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", hmmwave::exec::max_threads());
  std::printf("%-24s %15s %15s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    const int n = 1 << 20;
    std::vector<double> wm(n), w(n), out(n), cx(n);
    for (int i = 0; i < n; ++i) {
      w[i] = std::sin(0.001 * i);
      wm[i] = w[i];
      cx[i] = 1.0 + 0.5 * std::cos(0.002 * i);
    }
    const double dt = 1e-4, dx = 1e-3;
    const double ts = time_loop(
        20, [&] { st::serial::lf_step_1d(n, wm.data(), w.data(), out.data(),
                                         cx.data(), nullptr, dt, dx); });
    const double to = time_loop(
        20, [&] { st::omp::lf_step_1d(n, wm.data(), w.data(), out.data(),
                                      cx.data(), nullptr, dt, dx); });
    report("lf_step_1d (1M)", ts, to);
  }

  {
    const int n = 1024;
    std::vector<double> wm(n * n), w(n * n), out(n * n), cx(n * n), cy(n * n);
    for (int i = 0; i < n * n; ++i) {
      w[i] = std::sin(0.001 * i);
      wm[i] = w[i];
      cx[i] = 1.0 + 0.5 * std::cos(0.002 * i);
      cy[i] = 1.0 + 0.5 * std::sin(0.002 * i);
    }
    const double dt = 1e-4, dx = 1e-3;
    const double ts = time_loop(
        10, [&] { st::serial::lf_step_2d(n, wm.data(), w.data(), out.data(),
                                         cx.data(), cy.data(), nullptr, dt, dx); });
    const double to = time_loop(
        10, [&] { st::omp::lf_step_2d(n, wm.data(), w.data(), out.data(),
                                      cx.data(), cy.data(), nullptr, dt, dx); });
    report("lf_step_2d (1024^2)", ts, to);
  }

  {
    const int n = 1 << 22;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = std::sin(0.001 * i);
      b[i] = std::cos(0.001 * i);
    }
    const double ts =
        time_loop(20, [&] { (void)st::serial::dot_blocked(n, a.data(), b.data()); });
    const double to =
        time_loop(20, [&] { (void)st::omp::dot_blocked(n, a.data(), b.data()); });
    report("dot_blocked (4M)", ts, to);
  }

  {
    const auto field = hmmwave::media::catalog("locally-periodic-2d");
    const hmmwave::kernels::Kernel k(3, 6);
    hmmwave::micro::MicroProblem mp;
    mp.field = &field;
    mp.s = {1, 0};
    mp.eps = 0.0125;
    mp.eta = mp.tau = 0.1;
    mp.pts_per_eps = 16;

    hmmwave::exec::set_parallel(false);
    const auto t0 = clock_type::now();
    (void)hmmwave::micro::solve_micro(mp, k);
    const auto t1 = clock_type::now();
    hmmwave::exec::set_parallel(true);
    (void)hmmwave::micro::solve_micro(mp, k);
    const auto t2 = clock_type::now();
    report("micro solve 2d", seconds(t0, t1), seconds(t1, t2));
  }

  return 0;
}
