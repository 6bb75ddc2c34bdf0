#include "hmmwave/macro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hmmwave/cell.hpp"
#include "hmmwave/par.hpp"
#include "hmmwave/upscale.hpp"

namespace hmmwave::macroscale {

using media::Mat;
using media::Vec2;

double local_slope_1d(const std::vector<double>& u, int nx, int i, double H) {
  if (i < 0 || i > nx - 2) throw std::out_of_range("edge index out of range");
  return (u[i + 1] - u[i]) / H;
}

Vec2 local_slope_2d(const std::vector<double>& u, int nx, int axis, int i, int j,
                    double H) {
  auto at = [&](int a, int b) { return u[a * nx + b]; };
  // Work in edge-local coordinates: xi along the edge axis, psi across.
  // Full 6-point stencil when both neighbor rows exist, otherwise the
  // one-sided 4-point reduction.
  double b, c;
  if (axis == 0) {
    if (i < 0 || i > nx - 2 || j < 0 || j > nx - 1)
      throw std::out_of_range("edge index out of range");
    if (j >= 1 && j <= nx - 2) {
      b = (at(i + 1, j - 1) + at(i + 1, j) + at(i + 1, j + 1) - at(i, j - 1) -
           at(i, j) - at(i, j + 1)) /
          (3.0 * H);
      c = (at(i, j + 1) + at(i + 1, j + 1) - at(i, j - 1) - at(i + 1, j - 1)) /
          (4.0 * H);
    } else {
      const int j2 = j == 0 ? j + 1 : j - 1;
      b = (at(i + 1, j) + at(i + 1, j2) - at(i, j) - at(i, j2)) / (2.0 * H);
      c = (at(i, j2) + at(i + 1, j2) - at(i, j) - at(i + 1, j)) /
          (2.0 * H * double(j2 - j));
    }
    return {b, c};
  }
  if (j < 0 || j > nx - 2 || i < 0 || i > nx - 1)
    throw std::out_of_range("edge index out of range");
  if (i >= 1 && i <= nx - 2) {
    b = (at(i - 1, j + 1) + at(i, j + 1) + at(i + 1, j + 1) - at(i - 1, j) -
         at(i, j) - at(i + 1, j)) /
        (3.0 * H);
    c = (at(i + 1, j) + at(i + 1, j + 1) - at(i - 1, j) - at(i - 1, j + 1)) /
        (4.0 * H);
  } else {
    const int i2 = i == 0 ? i + 1 : i - 1;
    b = (at(i, j + 1) + at(i2, j + 1) - at(i, j) - at(i2, j)) / (2.0 * H);
    c = (at(i2, j) + at(i2, j + 1) - at(i, j) - at(i, j + 1)) /
        (2.0 * H * double(i2 - i));
  }
  return {c, b};  // {d/dx, d/dy}
}

namespace {

struct Grid {
  int nx;
  double lo, H;
  Vec2 node(int i, int j) const { return {lo + i * H, lo + j * H}; }
};

Grid make_grid(const MacroConfig& cfg) {
  if (cfg.cells < 2) throw std::invalid_argument("macro grid needs >= 2 cells");
  Grid g;
  g.nx = cfg.cells + 1;
  g.lo = cfg.lo;
  g.H = (cfg.hi - cfg.lo) / cfg.cells;
  return g;
}

Mat unit_slope_matrix(const MacroConfig& cfg, const Vec2& r0) {
  if (cfg.mode == FluxMode::reference)
    return cell::homogenized_tensor(*cfg.field, r0, cfg.cell_n).a0;
  Mat m;
  for (int l = 0; l < cfg.dim; ++l) {
    micro::MicroProblem mp;
    mp.field = cfg.field;
    mp.r0 = r0;
    mp.s = {0, 0};
    mp.s[l] = 1.0;
    mp.eps = cfg.micro.eps;
    mp.eta = cfg.micro.eta;
    mp.tau = cfg.micro.tau;
    mp.pts_per_eps = cfg.micro.pts_per_eps;
    mp.cfl = cfg.micro.cfl;
    const kernels::Kernel k(cfg.micro.p, cfg.micro.q);
    const Vec2 col = upscale::hmm_flux(mp, k).value;
    if (l == 0) {
      m.a11 = col[0];
      m.a12 = col[1];
    } else {
      m.a12 = 0.5 * (m.a12 + col[0]);
      m.a22 = col[1];
    }
  }
  if (cfg.dim == 1) m.a22 = m.a11;
  return m;
}

}  // namespace

FluxTable build_flux_table(const MacroConfig& cfg) {
  if (!cfg.field) throw std::invalid_argument("macro config has no coefficient field");
  const Grid g = make_grid(cfg);
  FluxTable t;
  if (!cfg.field->x_dependent) {
    t.shared = true;
    t.single = unit_slope_matrix(cfg, {cfg.lo, cfg.lo});
    return t;
  }
  if (cfg.dim == 1) {
    t.x_edges.resize(g.nx - 1);
#pragma omp parallel for schedule(dynamic) if (exec::use_omp())
    for (int i = 0; i < g.nx - 1; ++i)
      t.x_edges[i] = unit_slope_matrix(cfg, {g.lo + (i + 0.5) * g.H, 0.0});
    return t;
  }
  t.x_edges.resize((g.nx - 1) * g.nx);
  t.y_edges.resize(g.nx * (g.nx - 1));
#pragma omp parallel for schedule(dynamic) if (exec::use_omp())
  for (int i = 0; i < g.nx - 1; ++i)
    for (int j = 0; j < g.nx; ++j)
      t.x_edges[i * g.nx + j] =
          unit_slope_matrix(cfg, {g.lo + (i + 0.5) * g.H, g.lo + j * g.H});
#pragma omp parallel for schedule(dynamic) if (exec::use_omp())
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nx - 1; ++j)
      t.y_edges[i * (g.nx - 1) + j] =
          unit_slope_matrix(cfg, {g.lo + i * g.H, g.lo + (j + 0.5) * g.H});
  return t;
}

namespace {

// div F(., grad U) at interior nodes; boundary entries left at zero.
void flux_divergence(const MacroConfig& cfg, const FluxTable& table,
                     const Grid& g, const std::vector<double>& u,
                     std::vector<double>& out) {
  const int nx = g.nx;
  std::fill(out.begin(), out.end(), 0.0);
  if (cfg.dim == 1) {
    std::vector<double> fx(nx - 1);
    for (int i = 0; i < nx - 1; ++i) {
      const double s = local_slope_1d(u, nx, i, g.H);
      fx[i] = table.at(0, i).a11 * s;
    }
    for (int i = 1; i < nx - 1; ++i) out[i] = (fx[i] - fx[i - 1]) / g.H;
    return;
  }
  std::vector<double> fx((nx - 1) * nx, 0.0), fy(nx * (nx - 1), 0.0);
  for (int i = 0; i < nx - 1; ++i)
    for (int j = 1; j < nx - 1; ++j) {
      const Vec2 s = local_slope_2d(u, nx, 0, i, j, g.H);
      const Mat& a = table.at(0, i * nx + j);
      fx[i * nx + j] = a.a11 * s[0] + a.a12 * s[1];
    }
  for (int i = 1; i < nx - 1; ++i)
    for (int j = 0; j < nx - 1; ++j) {
      const Vec2 s = local_slope_2d(u, nx, 1, i, j, g.H);
      const Mat& a = table.at(1, i * (nx - 1) + j);
      fy[i * (nx - 1) + j] = a.a12 * s[0] + a.a22 * s[1];
    }
  for (int i = 1; i < nx - 1; ++i)
    for (int j = 1; j < nx - 1; ++j)
      out[i * nx + j] = (fx[i * nx + j] - fx[(i - 1) * nx + j]) / g.H +
                        (fy[i * (nx - 1) + j] - fy[i * (nx - 1) + j - 1]) / g.H;
}

void zero_boundary(int dim, int nx, std::vector<double>& u) {
  if (dim == 1) {
    u.front() = u.back() = 0.0;
    return;
  }
  for (int i = 0; i < nx; ++i) {
    u[i * nx] = u[i * nx + nx - 1] = 0.0;
    u[i] = u[(nx - 1) * nx + i] = 0.0;
  }
}

double resolve_dt(const MacroConfig& cfg, const Grid& g) {
  const double cap = cfg.cfl * g.H / std::sqrt(cfg.field->c2);
  if (cfg.dt > 0) {
    if (cfg.dt > cap * (1 + 1e-12))
      throw std::invalid_argument("macro dt violates the CFL bound");
    return cfg.dt;
  }
  return cap;
}

}  // namespace

MacroState init_first_step(const MacroConfig& cfg, const FluxTable& table,
                           double dt) {
  const Grid g = make_grid(cfg);
  const int nx = g.nx;
  const int sz = cfg.dim == 1 ? nx : nx * nx;
  MacroState st;
  st.u_prev.assign(sz, 0.0);
  st.u.assign(sz, 0.0);

  auto for_nodes = [&](auto&& fn) {
    if (cfg.dim == 1) {
      for (int i = 0; i < nx; ++i) fn(i, g.node(i, 0));
    } else {
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nx; ++j) fn(i * nx + j, g.node(i, j));
    }
  };

  for_nodes([&](int idx, const Vec2& x) { st.u_prev[idx] = cfg.g ? cfg.g(x) : 0.0; });
  zero_boundary(cfg.dim, nx, st.u_prev);

  std::vector<double> div(sz, 0.0);
  flux_divergence(cfg, table, g, st.u_prev, div);
  for_nodes([&](int idx, const Vec2& x) {
    const double hv = cfg.h ? cfg.h(x) : 0.0;
    const double fv = cfg.f ? cfg.f(0.0, x) : 0.0;
    st.u[idx] = st.u_prev[idx] + dt * hv + 0.5 * dt * dt * (div[idx] + fv);
  });
  zero_boundary(cfg.dim, nx, st.u);
  st.t = dt;
  st.step = 1;
  return st;
}

void step_macro(const MacroConfig& cfg, const FluxTable& table, double dt,
                MacroState& st) {
  const Grid g = make_grid(cfg);
  const int nx = g.nx;
  const int sz = int(st.u.size());
  std::vector<double> div(sz, 0.0);
  flux_divergence(cfg, table, g, st.u, div);
  std::vector<double> next(sz, 0.0);

  auto update = [&](int idx, const Vec2& x) {
    const double fv = cfg.f ? cfg.f(st.t, x) : 0.0;
    next[idx] = 2.0 * st.u[idx] - st.u_prev[idx] + dt * dt * (div[idx] + fv);
  };
  if (cfg.dim == 1) {
    for (int i = 1; i < nx - 1; ++i) update(i, g.node(i, 0));
  } else {
    for (int i = 1; i < nx - 1; ++i)
      for (int j = 1; j < nx - 1; ++j) update(i * nx + j, g.node(i, j));
  }
  st.u_prev.swap(st.u);
  st.u.swap(next);
  st.t += dt;
  st.step += 1;
}

MacroResult run_macro(const MacroConfig& cfg) {
  if (!cfg.field) throw std::invalid_argument("macro config has no coefficient field");
  if (cfg.field->dim != cfg.dim)
    throw std::invalid_argument("macro/coefficient dimension mismatch");
  const Grid g = make_grid(cfg);

  MacroResult res;
  res.dim = cfg.dim;
  res.nx = g.nx;
  res.lo = g.lo;
  res.H = g.H;

  const FluxTable table = build_flux_table(cfg);

  if (cfg.T <= 0.0) {
    // Initial data only.
    MacroState st = init_first_step(cfg, table, 1e-12);
    res.u = st.u_prev;
    res.dt = 0;
    res.steps = 0;
    res.t_final = 0;
    return res;
  }

  const double dt_req = resolve_dt(cfg, g);
  const int steps = std::max(1, int(std::ceil(cfg.T / dt_req - 1e-12)));
  const double dt = cfg.T / steps;
  res.dt = dt;
  res.steps = steps;

  std::vector<double> snap_times = cfg.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  std::size_t snap_idx = 0;

  MacroState st = init_first_step(cfg, table, dt);
  auto maybe_snapshot = [&](double t, const std::vector<double>& u) {
    while (snap_idx < snap_times.size() && snap_times[snap_idx] <= t + 0.5 * dt) {
      res.snapshots.push_back({t, u});
      ++snap_idx;
    }
  };
  maybe_snapshot(0.0, st.u_prev);
  maybe_snapshot(st.t, st.u);
  while (st.step < steps) {
    step_macro(cfg, table, dt, st);
    maybe_snapshot(st.t, st.u);
  }
  res.u = st.u;
  res.t_final = st.t;
  return res;
}

double macro_energy_drift(const MacroConfig& cfg_in) {
  MacroConfig cfg = cfg_in;
  cfg.f = nullptr;
  const Grid g = make_grid(cfg);
  const FluxTable table = build_flux_table(cfg);
  const double dt_req = resolve_dt(cfg, g);
  const int steps = std::max(1, int(std::ceil(cfg.T / dt_req - 1e-12)));
  const double dt = cfg.T / steps;
  const int sz = cfg.dim == 1 ? g.nx : g.nx * g.nx;
  const double cellw = cfg.dim == 1 ? g.H : g.H * g.H;

  MacroState st = init_first_step(cfg, table, dt);
  std::vector<double> div(sz, 0.0);
  auto energy = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double kin = 0.0;
    for (int i = 0; i < sz; ++i) {
      const double d = (b[i] - a[i]) / dt;
      kin += d * d;
    }
    flux_divergence(cfg, table, g, a, div);
    double pot = 0.0;
    for (int i = 0; i < sz; ++i) pot -= b[i] * div[i];
    return 0.5 * cellw * (kin + pot);
  };

  const double e0 = energy(st.u_prev, st.u);
  double drift = 0.0;
  while (st.step < steps) {
    step_macro(cfg, table, dt, st);
    drift = std::max(drift,
                     std::fabs(energy(st.u_prev, st.u) - e0) / std::fabs(e0));
  }
  return drift;
}

}  // namespace hmmwave::macroscale
