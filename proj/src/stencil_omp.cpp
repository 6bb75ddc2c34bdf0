#include <cmath>
#include <vector>

#include "hmmwave/par.hpp"
#include "hmmwave/stencils.hpp"
#include "stencil_elems.hpp"

// OpenMP drivers. Same per-element arithmetic as the serial reference;
// parallelism is over rows (2D) or index ranges (1D), which keeps results
// bitwise identical for any thread count.

namespace hmmwave::stencil::omp {

using namespace detail;

void div_flux_1d(int n, double* out, const double* cx, const double* v,
                 double s, double dx, bool add) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const double val = div_flux_elem_1d(i, n, cx, v, s, dx);
    out[i] = add ? out[i] + val : val;
  }
}

void div_flux_2d(int n, double* out, const double* cx, const double* cy,
                 const double* v, double sx, double sy, double dx, bool add) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double val = div_flux_elem_2d(i, j, n, cx, cy, v, sx, sy, dx);
      const int idx = i * n + j;
      out[idx] = add ? out[idx] + val : val;
    }
}

void div_flux_cross_2d(int n, double* out, const double* cxy, const double* v,
                       double sx, double sy, double dx) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i * n + j] += div_flux_cross_elem_2d(i, j, n, cxy, v, sx, sy, dx);
}

void lf_step_1d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* f, double dt, double dx) {
  const double dt2 = dt * dt;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = lf_elem_1d(i, n, wm, w, cx, f, dt2, dx);
}

void lf_step_2d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* cy, const double* f, double dt,
                double dx) {
  const double dt2 = dt * dt;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[i * n + j] = lf_elem_2d(i, j, n, wm, w, cx, cy, f, dt2, dx);
}

void grad_c_1d(int n, double* out, const double* v, double dx) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = grad_c_elem_1d(i, n, v, dx);
}

void grad4_1d(int n, double* out, const double* v, double dx) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = grad4_elem_1d(i, n, v, dx);
}

void grad_c_2d(int n, double* outx, double* outy, const double* v, double dx) {
  const double inv2 = 1.0 / (2.0 * dx);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int im = wrap_prev(i, n), ip = wrap_next(i, n);
    for (int j = 0; j < n; ++j) {
      const int jm = wrap_prev(j, n), jp = wrap_next(j, n);
      outx[i * n + j] = (v[ip * n + j] - v[im * n + j]) * inv2;
      outy[i * n + j] = (v[i * n + jp] - v[i * n + jm]) * inv2;
    }
  }
}

void acc_weighted(int n_total, double* acc, const double* w, double a) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_total; ++i) acc[i] += a * w[i];
}

double dot_blocked(int n_total, const double* a, const double* b) {
  const int nb = (n_total + kDotBlock - 1) / kDotBlock;
  std::vector<double> partial(nb);
#pragma omp parallel for schedule(static)
  for (int bi = 0; bi < nb; ++bi)
    partial[bi] = dot_block_partial(bi, n_total, a, b);
  double s = 0.0;
  for (int bi = 0; bi < nb; ++bi) s += partial[bi];
  return s;
}

double max_abs(int n_total, const double* a) {
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (int i = 0; i < n_total; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

double max_abs_diff(int n_total, const double* a, const double* b) {
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (int i = 0; i < n_total; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace hmmwave::stencil::omp

// Dispatching entry points.
namespace hmmwave::stencil {

#define HMMWAVE_DISPATCH(fn, ...) \
  (exec::use_omp() ? omp::fn(__VA_ARGS__) : serial::fn(__VA_ARGS__))

void div_flux_1d(int n, double* out, const double* cx, const double* v,
                 double s, double dx, bool add) {
  HMMWAVE_DISPATCH(div_flux_1d, n, out, cx, v, s, dx, add);
}
void div_flux_2d(int n, double* out, const double* cx, const double* cy,
                 const double* v, double sx, double sy, double dx, bool add) {
  HMMWAVE_DISPATCH(div_flux_2d, n, out, cx, cy, v, sx, sy, dx, add);
}
void div_flux_cross_2d(int n, double* out, const double* cxy, const double* v,
                       double sx, double sy, double dx) {
  HMMWAVE_DISPATCH(div_flux_cross_2d, n, out, cxy, v, sx, sy, dx);
}
void lf_step_1d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* f, double dt, double dx) {
  HMMWAVE_DISPATCH(lf_step_1d, n, wm, w, out, cx, f, dt, dx);
}
void lf_step_2d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* cy, const double* f, double dt,
                double dx) {
  HMMWAVE_DISPATCH(lf_step_2d, n, wm, w, out, cx, cy, f, dt, dx);
}
void grad_c_1d(int n, double* out, const double* v, double dx) {
  HMMWAVE_DISPATCH(grad_c_1d, n, out, v, dx);
}
void grad4_1d(int n, double* out, const double* v, double dx) {
  HMMWAVE_DISPATCH(grad4_1d, n, out, v, dx);
}
void grad_c_2d(int n, double* outx, double* outy, const double* v, double dx) {
  HMMWAVE_DISPATCH(grad_c_2d, n, outx, outy, v, dx);
}
void acc_weighted(int n_total, double* acc, const double* w, double a) {
  HMMWAVE_DISPATCH(acc_weighted, n_total, acc, w, a);
}
double dot_blocked(int n_total, const double* a, const double* b) {
  return HMMWAVE_DISPATCH(dot_blocked, n_total, a, b);
}
double max_abs(int n_total, const double* a) {
  return HMMWAVE_DISPATCH(max_abs, n_total, a);
}
double max_abs_diff(int n_total, const double* a, const double* b) {
  return HMMWAVE_DISPATCH(max_abs_diff, n_total, a, b);
}

#undef HMMWAVE_DISPATCH

}  // namespace hmmwave::stencil
