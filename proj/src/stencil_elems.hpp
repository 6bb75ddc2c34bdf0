#pragma once

// Per-element bodies shared by the serial and OpenMP stencil drivers. Both
// drivers must produce bitwise-identical results, so every arithmetic
// expression lives here exactly once; the drivers only differ in how the
// outer loop is scheduled.

namespace hmmwave::stencil::detail {

inline int wrap_prev(int i, int n) { return i == 0 ? n - 1 : i - 1; }
inline int wrap_next(int i, int n) { return i == n - 1 ? 0 : i + 1; }

inline double div_flux_elem_1d(int i, int n, const double* cx, const double* v,
                               double s, double dx) {
  const int im = wrap_prev(i, n);
  if (v) {
    const int ip = wrap_next(i, n);
    const double fe = cx[i] * (s + (v[ip] - v[i]) / dx);
    const double fw = cx[im] * (s + (v[i] - v[im]) / dx);
    return (fe - fw) / dx;
  }
  return (cx[i] - cx[im]) * s / dx;
}

inline double div_flux_elem_2d(int i, int j, int n, const double* cx,
                               const double* cy, const double* v, double sx,
                               double sy, double dx) {
  const int im = wrap_prev(i, n), ip = wrap_next(i, n);
  const int jm = wrap_prev(j, n), jp = wrap_next(j, n);
  const int idx = i * n + j;
  if (v) {
    const double fxe = cx[idx] * (sx + (v[ip * n + j] - v[idx]) / dx);
    const double fxw = cx[im * n + j] * (sx + (v[idx] - v[im * n + j]) / dx);
    const double fyn = cy[idx] * (sy + (v[i * n + jp] - v[idx]) / dx);
    const double fys = cy[i * n + jm] * (sy + (v[idx] - v[i * n + jm]) / dx);
    return (fxe - fxw) / dx + (fyn - fys) / dx;
  }
  return (cx[idx] - cx[im * n + j]) * sx / dx +
         (cy[idx] - cy[i * n + jm]) * sy / dx;
}

inline double div_flux_cross_elem_2d(int i, int j, int n, const double* cxy,
                                     const double* v, double sx, double sy,
                                     double dx) {
  const int im = wrap_prev(i, n), ip = wrap_next(i, n);
  const int jm = wrap_prev(j, n), jp = wrap_next(j, n);
  const double inv2 = 1.0 / (2.0 * dx);
  double gy_ip = sy, gy_im = sy, gx_jp = sx, gx_jm = sx;
  if (v) {
    gy_ip += (v[ip * n + jp] - v[ip * n + jm]) * inv2;
    gy_im += (v[im * n + jp] - v[im * n + jm]) * inv2;
    gx_jp += (v[ip * n + jp] - v[im * n + jp]) * inv2;
    gx_jm += (v[ip * n + jm] - v[im * n + jm]) * inv2;
  }
  return (cxy[ip * n + j] * gy_ip - cxy[im * n + j] * gy_im) * inv2 +
         (cxy[i * n + jp] * gx_jp - cxy[i * n + jm] * gx_jm) * inv2;
}

inline double lf_elem_1d(int i, int n, const double* wm, const double* w,
                         const double* cx, const double* f, double dt2,
                         double dx) {
  const int im = wrap_prev(i, n), ip = wrap_next(i, n);
  const double lap =
      (cx[i] * (w[ip] - w[i]) - cx[im] * (w[i] - w[im])) / (dx * dx);
  const double rhs = f ? lap + f[i] : lap;
  return 2.0 * w[i] - wm[i] + dt2 * rhs;
}

inline double lf_elem_2d(int i, int j, int n, const double* wm, const double* w,
                         const double* cx, const double* cy, const double* f,
                         double dt2, double dx) {
  const int im = wrap_prev(i, n), ip = wrap_next(i, n);
  const int jm = wrap_prev(j, n), jp = wrap_next(j, n);
  const int idx = i * n + j;
  const double lap = (cx[idx] * (w[ip * n + j] - w[idx]) -
                      cx[im * n + j] * (w[idx] - w[im * n + j]) +
                      cy[idx] * (w[i * n + jp] - w[idx]) -
                      cy[i * n + jm] * (w[idx] - w[i * n + jm])) /
                     (dx * dx);
  const double rhs = f ? lap + f[idx] : lap;
  return 2.0 * w[idx] - wm[idx] + dt2 * rhs;
}

inline double grad_c_elem_1d(int i, int n, const double* v, double dx) {
  return (v[wrap_next(i, n)] - v[wrap_prev(i, n)]) / (2.0 * dx);
}

inline double grad4_elem_1d(int i, int n, const double* v, double dx) {
  const int im = wrap_prev(i, n), ip = wrap_next(i, n);
  const int imm = wrap_prev(im, n), ipp = wrap_next(ip, n);
  return (8.0 * (v[ip] - v[im]) - (v[ipp] - v[imm])) / (12.0 * dx);
}

constexpr int kDotBlock = 1024;

inline double dot_block_partial(int b, int n_total, const double* a,
                                const double* x) {
  const int lo = b * kDotBlock;
  const int hi = lo + kDotBlock < n_total ? lo + kDotBlock : n_total;
  double s = 0.0;
  for (int i = lo; i < hi; ++i) s += a[i] * x[i];
  return s;
}

}  // namespace hmmwave::stencil::detail
