#include "hmmwave/micro.hpp"

#include <cmath>
#include <stdexcept>

#include "hmmwave/stencils.hpp"

namespace hmmwave::micro {

using media::CoefficientField;
using media::Vec2;
namespace st = hmmwave::stencil;

namespace {

struct BoxTables {
  int dim = 1, n = 0;
  double lo = 0, dx = 0;
  std::vector<double> cx, cy, cxy;
  bool has_cross = false;
};

// Coefficient A(x + r0, (x + r0)/eps) sampled on the shifted box grid.
BoxTables build_tables(const CoefficientField& f, const Vec2& r0, double eps,
                       double lo, int n, double dx) {
  BoxTables t;
  t.dim = f.dim;
  t.n = n;
  t.lo = lo;
  t.dx = dx;
  auto at = [&](double x1, double x2) {
    const Vec2 xs{x1 + r0[0], x2 + r0[1]};
    const Vec2 ys{xs[0] / eps, xs[1] / eps};
    return f.eval(xs, ys);
  };
  if (f.dim == 1) {
    t.cx.resize(n);
    for (int i = 0; i < n; ++i) t.cx[i] = at(lo + (i + 0.5) * dx, 0.0).a11;
    return t;
  }
  t.cx.resize(n * n);
  t.cy.resize(n * n);
  if (!f.scalar) t.cxy.assign(n * n, 0.0);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    const double x1 = lo + i * dx, x1h = lo + (i + 0.5) * dx;
    for (int j = 0; j < n; ++j) {
      const double x2 = lo + j * dx, x2h = lo + (j + 0.5) * dx;
      t.cx[i * n + j] = at(x1h, x2).a11;
      t.cy[i * n + j] = at(x1, x2h).a22;
      if (!f.scalar) {
        const double v = at(x1, x2).a12;
        t.cxy[i * n + j] = v;
        any = any || v != 0.0;
      }
    }
  }
  t.has_cross = any;
  if (!any) t.cxy.clear();
  return t;
}

struct Geometry {
  int n;
  double lo, dx, dt;
  int steps;
};

Geometry resolve_geometry(const MicroProblem& p) {
  if (!p.field) throw std::invalid_argument("micro problem has no coefficient field");
  if (!(p.eps > 0) || !(p.eta > 0) || !(p.tau > 0))
    throw std::invalid_argument("micro scales must be positive");
  if (p.eps > p.eta) throw std::invalid_argument("micro problem requires eps <= eta");
  if (p.pts_per_eps < 16)
    throw std::invalid_argument("pts_per_eps must be >= 16 to resolve the fast scale");
  if (!(p.cfl > 0) || p.cfl >= 1.0) throw std::invalid_argument("cfl must be in (0,1)");

  Geometry g;
  g.dx = p.eps / p.pts_per_eps;
  const double c2 = p.field->c2;
  const double L_req = 0.5 * p.eta + 0.5 * p.tau * std::sqrt(c2);
  double L = p.L_eta;
  if (L > 0) {
    if (L < L_req - 1e-12)
      throw std::invalid_argument("micro box too small: needs eta/2 + tau/2 sqrt(c2)");
  } else {
    L = L_req + 4.0 * g.dx;
  }
  const int half = int(std::ceil(L / g.dx - 1e-12));
  g.n = 2 * half;
  g.lo = -half * g.dx;

  const double dt0 = p.cfl * g.dx / std::sqrt(c2);
  g.steps = int(std::ceil(0.5 * p.tau / dt0 - 1e-12));
  g.dt = 0.5 * p.tau / g.steps;
  return g;
}

// out = 2 w - wm + dt^2 (div(A grad w) + b), general matrix path.
void advance_general(const BoxTables& t, const std::vector<double>& wm,
                     const std::vector<double>& w, std::vector<double>& out,
                     const std::vector<double>& b, std::vector<double>& scratch,
                     double dt) {
  const int sz = int(w.size());
  st::div_flux_2d(t.n, scratch.data(), t.cx.data(), t.cy.data(), w.data(), 0.0,
                  0.0, t.dx, false);
  st::div_flux_cross_2d(t.n, scratch.data(), t.cxy.data(), w.data(), 0.0, 0.0,
                        t.dx);
  const double dt2 = dt * dt;
  for (int i = 0; i < sz; ++i)
    out[i] = 2.0 * w[i] - wm[i] + dt2 * (scratch[i] + b[i]);
}

}  // namespace

MicroSolution solve_micro(const MicroProblem& p, const kernels::Kernel& time_kernel,
                          int history_stride) {
  const Geometry g = resolve_geometry(p);
  const CoefficientField& f = *p.field;
  const BoxTables t = build_tables(f, p.r0, p.eps, g.lo, g.n, g.dx);
  const int sz = f.dim == 1 ? g.n : g.n * g.n;

  // Static forcing div(A s) from the affine part of the initial data.
  std::vector<double> b(sz, 0.0);
  if (f.dim == 1) {
    st::div_flux_1d(g.n, b.data(), t.cx.data(), nullptr, p.s[0], g.dx, false);
  } else {
    st::div_flux_2d(g.n, b.data(), t.cx.data(), t.cy.data(), nullptr, p.s[0],
                    p.s[1], g.dx, false);
    if (t.has_cross)
      st::div_flux_cross_2d(g.n, b.data(), t.cxy.data(), nullptr, p.s[0], p.s[1],
                            g.dx);
  }

  std::vector<double> w_prev(sz, 0.0), w(sz, 0.0), w_next(sz, 0.0);
  std::vector<double> scratch(t.has_cross ? sz : 0);
  std::vector<double> acc(sz, 0.0);
  double mass = 0.0;

  MicroSolution sol;
  sol.dim = f.dim;
  sol.n = g.n;
  sol.lo = g.lo;
  sol.dx = g.dx;
  sol.dt = g.dt;
  sol.steps = g.steps;
  sol.c2 = f.c2;

  const double half_tau = 0.5 * p.tau;
  for (int m = 0; m <= g.steps; ++m) {
    const double wt =
        time_kernel.eval_scaled(half_tau, m * g.dt) * g.dt * (m == 0 ? 1.0 : 2.0);
    if (wt != 0.0) st::acc_weighted(sz, acc.data(), w.data(), wt);
    mass += wt;
    if (history_stride > 0 && (m % history_stride == 0 || m == g.steps)) {
      sol.history_t.push_back(m * g.dt);
      sol.history.push_back(w);
    }
    if (m == g.steps) break;

    if (m == 0) {
      // Taylor first step: w^1 = (dt^2/2) b since w^0 = dw/dt(0) = 0.
      const double h = 0.5 * g.dt * g.dt;
      for (int i = 0; i < sz; ++i) w_next[i] = h * b[i];
    } else if (t.has_cross) {
      advance_general(t, w_prev, w, w_next, b, scratch, g.dt);
    } else if (f.dim == 1) {
      st::lf_step_1d(g.n, w_prev.data(), w.data(), w_next.data(), t.cx.data(),
                     b.data(), g.dt, g.dx);
    } else {
      st::lf_step_2d(g.n, w_prev.data(), w.data(), w_next.data(), t.cx.data(),
                     t.cy.data(), b.data(), g.dt, g.dx);
    }
    std::swap(w_prev, w);
    std::swap(w, w_next);
  }

  if (!(mass > 0.0)) throw std::runtime_error("time kernel mass vanished");
  sol.wbar = std::move(acc);
  for (double& v : sol.wbar) v /= mass;
  return sol;
}

double check_time_symmetry(const MicroProblem& p, const kernels::Kernel& time_kernel,
                           int compare_stride) {
  if (compare_stride < 1) compare_stride = 1;
  MicroSolution fwd = solve_micro(p, time_kernel, compare_stride);

  // Explicit negative branch: from dw/dt(0) = 0 the centered initialization
  // gives w^{-1} = w^{1}, after which the backward recursion is stepped on
  // its own buffers.
  const Geometry g = resolve_geometry(p);
  const CoefficientField& f = *p.field;
  const BoxTables t = build_tables(f, p.r0, p.eps, g.lo, g.n, g.dx);
  const int sz = f.dim == 1 ? g.n : g.n * g.n;

  std::vector<double> b(sz, 0.0);
  if (f.dim == 1) {
    st::div_flux_1d(g.n, b.data(), t.cx.data(), nullptr, p.s[0], g.dx, false);
  } else {
    st::div_flux_2d(g.n, b.data(), t.cx.data(), t.cy.data(), nullptr, p.s[0],
                    p.s[1], g.dx, false);
    if (t.has_cross)
      st::div_flux_cross_2d(g.n, b.data(), t.cxy.data(), nullptr, p.s[0], p.s[1],
                            g.dx);
  }

  std::vector<double> w_fut(sz, 0.0), w(sz, 0.0), w_back(sz, 0.0);
  std::vector<double> scratch(t.has_cross ? sz : 0);
  double max_asym = 0.0;
  std::size_t hidx = 0;
  for (int m = 0; m <= g.steps; ++m) {
    if (hidx < fwd.history_t.size() &&
        std::fabs(fwd.history_t[hidx] - m * g.dt) < 0.25 * g.dt) {
      max_asym = std::max(
          max_asym, st::max_abs_diff(sz, w.data(), fwd.history[hidx].data()));
      ++hidx;
    }
    if (m == g.steps) break;
    if (m == 0) {
      const double h = 0.5 * g.dt * g.dt;
      for (int i = 0; i < sz; ++i) w_back[i] = h * b[i];
    } else if (t.has_cross) {
      advance_general(t, w_fut, w, w_back, b, scratch, g.dt);
    } else if (f.dim == 1) {
      st::lf_step_1d(g.n, w_fut.data(), w.data(), w_back.data(), t.cx.data(),
                     b.data(), g.dt, g.dx);
    } else {
      st::lf_step_2d(g.n, w_fut.data(), w.data(), w_back.data(), t.cx.data(),
                     t.cy.data(), b.data(), g.dt, g.dx);
    }
    std::swap(w_fut, w);
    std::swap(w, w_back);
  }
  return max_asym;
}

double energy_drift_probe(const CoefficientField& f, const Vec2& r0, double eps,
                          double box_half_width, int n, double cfl, int steps) {
  if (f.dim != 1 && f.dim != 2)
    throw std::invalid_argument("energy probe supports dim 1 or 2");
  const double lo = -box_half_width;
  const double dx = 2.0 * box_half_width / n;
  const BoxTables t = build_tables(f, r0, eps, lo, n, dx);
  const int sz = f.dim == 1 ? n : n * n;
  const double dt = cfl * dx / std::sqrt(f.c2);

  const double len = 2.0 * box_half_width;
  std::vector<double> w(sz), w_prev(sz), w_next(sz);
  for (int i = 0; i < n; ++i) {
    const double u1 = std::sin(2.0 * M_PI * (i * dx) / len) +
                      0.3 * std::sin(4.0 * M_PI * (i * dx) / len);
    if (f.dim == 1) {
      w[i] = u1;
    } else {
      for (int j = 0; j < n; ++j)
        w[i * n + j] = u1 * std::cos(2.0 * M_PI * (j * dx) / len);
    }
  }
  // Zero initial velocity, forcing-free: w^1 = w^0 + (dt^2/2) L w^0.
  std::vector<double> lw(sz);
  auto apply_l = [&](const std::vector<double>& v, std::vector<double>& out) {
    if (f.dim == 1) {
      st::div_flux_1d(n, out.data(), t.cx.data(), v.data(), 0.0, dx, false);
    } else {
      st::div_flux_2d(n, out.data(), t.cx.data(), t.cy.data(), v.data(), 0.0,
                      0.0, dx, false);
      if (t.has_cross)
        st::div_flux_cross_2d(n, out.data(), t.cxy.data(), v.data(), 0.0, 0.0, dx);
    }
  };
  apply_l(w, lw);
  w_prev = w;
  for (int i = 0; i < sz; ++i) w[i] = w_prev[i] + 0.5 * dt * dt * lw[i];

  const double cellw = f.dim == 1 ? dx : dx * dx;
  auto energy = [&](const std::vector<double>& a, const std::vector<double>& bb) {
    // (1/2)||(b-a)/dt||^2 + (1/2) sum_e c_e D+a D+b, the conserved form.
    double kin = 0.0;
    for (int i = 0; i < sz; ++i) {
      const double d = (bb[i] - a[i]) / dt;
      kin += d * d;
    }
    double pot = 0.0;
    if (f.dim == 1) {
      for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        pot += t.cx[i] * (a[ip] - a[i]) * (bb[ip] - bb[i]) / (dx * dx);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        for (int j = 0; j < n; ++j) {
          const int jp = (j + 1) % n;
          const int idx = i * n + j;
          pot += t.cx[idx] * (a[ip * n + j] - a[idx]) * (bb[ip * n + j] - bb[idx]) /
                 (dx * dx);
          pot += t.cy[idx] * (a[i * n + jp] - a[idx]) * (bb[i * n + jp] - bb[idx]) /
                 (dx * dx);
        }
      }
    }
    return 0.5 * cellw * (kin + pot);
  };

  const double e0 = energy(w_prev, w);
  double drift = 0.0;
  for (int m = 1; m < steps; ++m) {
    if (f.dim == 1) {
      st::lf_step_1d(n, w_prev.data(), w.data(), w_next.data(), t.cx.data(),
                     nullptr, dt, dx);
    } else if (t.has_cross) {
      std::vector<double> scr(sz);
      advance_general(t, w_prev, w, w_next, std::vector<double>(sz, 0.0), scr, dt);
    } else {
      st::lf_step_2d(n, w_prev.data(), w.data(), w_next.data(), t.cx.data(),
                     t.cy.data(), nullptr, dt, dx);
    }
    std::swap(w_prev, w);
    std::swap(w, w_next);
    drift = std::max(drift, std::fabs(energy(w_prev, w) - e0) / std::fabs(e0));
  }
  return drift;
}

}  // namespace hmmwave::micro
