#pragma once

namespace hmmwave::stencil {

// Low-level array kernels shared by the wave steppers, the cell solver and
// the averaging passes. Every kernel has a serial reference implementation
// (stencil_serial.cpp) and an OpenMP implementation (stencil_omp.cpp) with
// identical arithmetic per element, so results are bitwise equal for any
// thread count. The undecorated names dispatch on exec::use_omp().
//
// Conventions:
//  - 1D fields are periodic arrays of length n with spacing dx.
//  - 2D fields are n x n row-major, idx = i*n + j, periodic in both axes.
//  - Edge coefficient arrays hold values at cell-face midpoints: cx[i] (1D)
//    and cx[i*n+j] (2D) sit between node i(,j) and node i+1(,j); cy[i*n+j]
//    between node (i,j) and (i,j+1). Cross coefficients cxy live at nodes.

// out[i] (+)= div of the flux  F = c * (s + grad v)  restricted to the
// diagonal part; v may be null (treated as zero field), s is a constant
// slope. add=false overwrites out.
void div_flux_1d(int n, double* out, const double* cx, const double* v,
                 double s, double dx, bool add);
void div_flux_2d(int n, double* out, const double* cx, const double* cy,
                 const double* v, double sx, double sy, double dx, bool add);

// Adds the mixed-derivative part  d_x(cxy*(sy + d_y v)) + d_y(cxy*(sx + d_x v))
// with node-centered cxy and central differences. Always accumulates.
void div_flux_cross_2d(int n, double* out, const double* cxy, const double* v,
                       double sx, double sy, double dx);

// Fused leap-frog update with diagonal coefficients:
//   out = 2 w - wm + dt^2 * ( div(c grad w) + f ),   f may be null.
void lf_step_1d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* f, double dt, double dx);
void lf_step_2d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* cy, const double* f,
                double dt, double dx);

// Periodic central-difference gradients. grad4_1d is the 4th-order stencil.
void grad_c_1d(int n, double* out, const double* v, double dx);
void grad4_1d(int n, double* out, const double* v, double dx);
void grad_c_2d(int n, double* outx, double* outy, const double* v, double dx);

// acc[i] += a * w[i]  over a flat array.
void acc_weighted(int n_total, double* acc, const double* w, double a);

// Deterministic dot product: fixed 1024-element block partials accumulated
// in index order regardless of thread count.
double dot_blocked(int n_total, const double* a, const double* b);

double max_abs(int n_total, const double* a);
double max_abs_diff(int n_total, const double* a, const double* b);

// Serial reference variants (exposed for the equivalence tests and the
// benchmark; normal code calls the dispatching names above).
namespace serial {
void div_flux_1d(int n, double* out, const double* cx, const double* v,
                 double s, double dx, bool add);
void div_flux_2d(int n, double* out, const double* cx, const double* cy,
                 const double* v, double sx, double sy, double dx, bool add);
void div_flux_cross_2d(int n, double* out, const double* cxy, const double* v,
                       double sx, double sy, double dx);
void lf_step_1d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* f, double dt, double dx);
void lf_step_2d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* cy, const double* f,
                double dt, double dx);
void grad_c_1d(int n, double* out, const double* v, double dx);
void grad4_1d(int n, double* out, const double* v, double dx);
void grad_c_2d(int n, double* outx, double* outy, const double* v, double dx);
void acc_weighted(int n_total, double* acc, const double* w, double a);
double dot_blocked(int n_total, const double* a, const double* b);
double max_abs(int n_total, const double* a);
double max_abs_diff(int n_total, const double* a, const double* b);
}  // namespace serial

namespace omp {
void div_flux_1d(int n, double* out, const double* cx, const double* v,
                 double s, double dx, bool add);
void div_flux_2d(int n, double* out, const double* cx, const double* cy,
                 const double* v, double sx, double sy, double dx, bool add);
void div_flux_cross_2d(int n, double* out, const double* cxy, const double* v,
                       double sx, double sy, double dx);
void lf_step_1d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* f, double dt, double dx);
void lf_step_2d(int n, const double* wm, const double* w, double* out,
                const double* cx, const double* cy, const double* f,
                double dt, double dx);
void grad_c_1d(int n, double* out, const double* v, double dx);
void grad4_1d(int n, double* out, const double* v, double dx);
void grad_c_2d(int n, double* outx, double* outy, const double* v, double dx);
void acc_weighted(int n_total, double* acc, const double* w, double a);
double dot_blocked(int n_total, const double* a, const double* b);
double max_abs(int n_total, const double* a);
double max_abs_diff(int n_total, const double* a, const double* b);
}  // namespace omp

}  // namespace hmmwave::stencil
