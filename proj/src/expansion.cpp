#include "hmmwave/expansion.hpp"

#include <cmath>
#include <stdexcept>

#include "hmmwave/cell.hpp"
#include "hmmwave/micro.hpp"
#include "hmmwave/stencils.hpp"
#include "hmmwave/upscale.hpp"

namespace hmmwave::expansion {

using media::CoefficientField;
using media::Vec2;
namespace st = hmmwave::stencil;

namespace {

void require_scalar(const CoefficientField& f) {
  if (!f.scalar)
    throw std::invalid_argument(
        "expansion experiments support scalar coefficients only");
}

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / double(v.size());
}

// ---------------------------------------------------------------------
// Cell hierarchy: v00, v11j, v10~ and g(t) co-evolved on the unit cell
// with the slow variable frozen at the origin.
// ---------------------------------------------------------------------

struct CellTables {
  int dim = 1, n = 0;
  double dx = 0;
  std::vector<double> a_half[2];      // A at face midpoints per direction
  std::vector<double> a_node;
  std::vector<double> da_half[2][2];  // [slow index k][direction]
  std::vector<double> da_node[2];
};

CellTables build_cell_tables(const CoefficientField& f, int n) {
  require_scalar(f);
  CellTables t;
  t.dim = f.dim;
  t.n = n;
  t.dx = 1.0 / n;
  const Vec2 x0{0, 0};
  const double h = t.dx;
  auto a = [&](double y1, double y2) { return f.eval(x0, {y1, y2}).a11; };
  auto da = [&](int k, double y1, double y2) {
    return f.slow_grad(x0, {y1, y2})[k].a11;
  };
  if (f.dim == 1) {
    t.a_half[0].resize(n);
    t.a_node.resize(n);
    t.da_half[0][0].resize(n);
    t.da_node[0].resize(n);
    for (int i = 0; i < n; ++i) {
      t.a_half[0][i] = a((i + 0.5) * h, 0);
      t.a_node[i] = a(i * h, 0);
      t.da_half[0][0][i] = da(0, (i + 0.5) * h, 0);
      t.da_node[0][i] = da(0, i * h, 0);
    }
    return t;
  }
  const int sz = n * n;
  t.a_half[0].resize(sz);
  t.a_half[1].resize(sz);
  t.a_node.resize(sz);
  for (int k = 0; k < 2; ++k) {
    t.da_half[k][0].resize(sz);
    t.da_half[k][1].resize(sz);
    t.da_node[k].resize(sz);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int idx = i * n + j;
      t.a_half[0][idx] = a((i + 0.5) * h, j * h);
      t.a_half[1][idx] = a(i * h, (j + 0.5) * h);
      t.a_node[idx] = a(i * h, j * h);
      for (int k = 0; k < 2; ++k) {
        t.da_half[k][0][idx] = da(k, (i + 0.5) * h, j * h);
        t.da_half[k][1][idx] = da(k, i * h, (j + 0.5) * h);
        t.da_node[k][idx] = da(k, i * h, j * h);
      }
    }
  return t;
}

// out (+)= div( c (s + grad v) ) with face-midpoint tables c.
void div_flux_tbl(const CellTables& t, const std::vector<double>* c_half,
                  const double* v, const Vec2& s, double* out, bool add) {
  if (t.dim == 1)
    st::div_flux_1d(t.n, out, c_half[0].data(), v, s[0], t.dx, add);
  else
    st::div_flux_2d(t.n, out, c_half[0].data(), c_half[1].data(), v, s[0], s[1],
                    t.dx, add);
}

// out += d_dir ( c_half * v ), product sampled at face midpoints.
void add_div_product(const CellTables& t, int dir,
                     const std::vector<double>& c_half,
                     const std::vector<double>& v, std::vector<double>& out) {
  const int n = t.n;
  const double dx = t.dx;
  if (t.dim == 1) {
    for (int i = 0; i < n; ++i) {
      const int im = i == 0 ? n - 1 : i - 1;
      const int ip = i == n - 1 ? 0 : i + 1;
      const double fe = c_half[i] * 0.5 * (v[i] + v[ip]);
      const double fw = c_half[im] * 0.5 * (v[im] + v[i]);
      out[i] += (fe - fw) / dx;
    }
    return;
  }
  for (int i = 0; i < n; ++i) {
    const int im = i == 0 ? n - 1 : i - 1;
    const int ip = i == n - 1 ? 0 : i + 1;
    for (int j = 0; j < n; ++j) {
      const int jm = j == 0 ? n - 1 : j - 1;
      const int jp = j == n - 1 ? 0 : j + 1;
      const int idx = i * n + j;
      double fe, fw;
      if (dir == 0) {
        fe = c_half[idx] * 0.5 * (v[idx] + v[ip * n + j]);
        fw = c_half[im * n + j] * 0.5 * (v[im * n + j] + v[idx]);
      } else {
        fe = c_half[idx] * 0.5 * (v[idx] + v[i * n + jp]);
        fw = c_half[i * n + jm] * 0.5 * (v[i * n + jm] + v[idx]);
      }
      out[idx] += (fe - fw) / dx;
    }
  }
}

// out += c_node * (s + d_dir v), central difference.
void add_weighted_grad(const CellTables& t, int dir,
                       const std::vector<double>& c_node,
                       const std::vector<double>& v, double s,
                       std::vector<double>& out) {
  const int n = t.n;
  const double inv2 = 1.0 / (2.0 * t.dx);
  if (t.dim == 1) {
    for (int i = 0; i < n; ++i) {
      const int im = i == 0 ? n - 1 : i - 1;
      const int ip = i == n - 1 ? 0 : i + 1;
      out[i] += c_node[i] * (s + (v[ip] - v[im]) * inv2);
    }
    return;
  }
  for (int i = 0; i < n; ++i) {
    const int im = i == 0 ? n - 1 : i - 1;
    const int ip = i == n - 1 ? 0 : i + 1;
    for (int j = 0; j < n; ++j) {
      const int jm = j == 0 ? n - 1 : j - 1;
      const int jp = j == n - 1 ? 0 : j + 1;
      const int idx = i * n + j;
      const double g = dir == 0 ? (v[ip * n + j] - v[im * n + j]) * inv2
                                : (v[i * n + jp] - v[i * n + jm]) * inv2;
      out[idx] += c_node[idx] * (s + g);
    }
  }
}

double h1_norm(int dim, int n, double dx, const std::vector<double>& v) {
  const int sz = int(v.size());
  const double cellw = dim == 1 ? dx : dx * dx;
  double s2 = st::dot_blocked(sz, v.data(), v.data());
  std::vector<double> gx(sz), gy(dim == 2 ? sz : 0);
  if (dim == 1) {
    st::grad_c_1d(n, gx.data(), v.data(), dx);
    s2 += st::dot_blocked(sz, gx.data(), gx.data());
  } else {
    st::grad_c_2d(n, gx.data(), gy.data(), v.data(), dx);
    s2 += st::dot_blocked(sz, gx.data(), gx.data());
    s2 += st::dot_blocked(sz, gy.data(), gy.data());
  }
  return std::sqrt(s2 * cellw);
}

double l2_norm(int dim, double dx, const std::vector<double>& v) {
  const double cellw = dim == 1 ? dx : dx * dx;
  return std::sqrt(st::dot_blocked(int(v.size()), v.data(), v.data()) * cellw);
}

struct Hierarchy {
  int dim = 1, n = 0, steps = 0;
  double dx = 0, dt = 0, t_final = 0;
  std::vector<double> v00, v11[2], vt10;  // fields at t_final
  std::vector<double> g_times, g_values;
  double g_final = 0;
  std::vector<double> d00, d11[2], d10;  // kernel averages (when requested)
  double g_avg = 0;
  double max_mean_drift = 0;
  double sup_h1_v00 = 0, avg_h1_v00 = 0;
};

// kernel != nullptr selects averaging mode: horizon tau/(2 eps) in fast
// time, accumulating d00/d11/d10/g_avg with weights eps K_{tau/2}(eps t).
Hierarchy run_hierarchy(const CoefficientField& f, const Vec2& s, int n,
                        double t_final, double cfl, const kernels::Kernel* k,
                        double eps, double tau) {
  const CellTables t = build_cell_tables(f, n);
  const int d = t.dim;
  const int sz = d == 1 ? n : n * n;

  Hierarchy out;
  out.dim = d;
  out.n = n;
  out.dx = t.dx;

  const double dt0 = cfl * t.dx / std::sqrt(f.c2);
  out.steps = std::max(1, int(std::ceil(t_final / dt0 - 1e-12)));
  out.dt = t_final / out.steps;
  out.t_final = t_final;
  const double dt = out.dt;

  std::vector<double> b00(sz, 0.0);
  div_flux_tbl(t, t.a_half, nullptr, s, b00.data(), false);

  struct Sys {
    std::vector<double> wm, w, wn;
    explicit Sys(int sz = 0)
        : wm(sz, 0.0), w(sz, 0.0), wn(sz, 0.0) {}
    void rotate() {
      wm.swap(w);
      w.swap(wn);
    }
  };
  Sys v00(sz), vt10(sz);
  Sys v11[2] = {Sys(sz), Sys(d == 2 ? sz : 0)};
  double g_prev = 0.0, g = 0.0;

  std::vector<double> f11[2], mbuf(sz);
  for (int j = 0; j < d; ++j) f11[j].assign(sz, 0.0);

  std::vector<double> acc00, acc11[2], acc10;
  double acc_g = 0.0, mass = 0.0;
  if (k) {
    acc00.assign(sz, 0.0);
    for (int j = 0; j < d; ++j) acc11[j].assign(sz, 0.0);
    acc10.assign(sz, 0.0);
  }

  double h1_sum = 0.0;
  int h1_count = 0;

  auto advance = [&](Sys& sys, const double* force) {
    if (d == 1)
      st::lf_step_1d(n, sys.wm.data(), sys.w.data(), sys.wn.data(),
                     t.a_half[0].data(), force, dt, t.dx);
    else
      st::lf_step_2d(n, sys.wm.data(), sys.w.data(), sys.wn.data(),
                     t.a_half[0].data(), t.a_half[1].data(), force, dt, t.dx);
    sys.rotate();
  };
  auto first_step = [&](Sys& sys, const std::vector<double>& force) {
    const double h = 0.5 * dt * dt;
    for (int i = 0; i < sz; ++i) sys.wn[i] = h * force[i];
    sys.rotate();
  };

  for (int m = 0; m <= out.steps; ++m) {
    const double tm = m * dt;

    if (k) {
      const double wt =
          eps * k->eval_scaled(0.5 * tau, eps * tm) * dt * (m == 0 ? 1.0 : 2.0);
      if (wt != 0.0) {
        st::acc_weighted(sz, acc00.data(), v00.w.data(), wt);
        for (int j = 0; j < d; ++j)
          st::acc_weighted(sz, acc11[j].data(), v11[j].w.data(), wt);
        st::acc_weighted(sz, acc10.data(), vt10.w.data(), wt);
        acc_g += wt * g;
      }
      mass += wt;
    }

    if (m % 16 == 0 || m == out.steps) {
      double drift = std::fabs(mean_of(v00.w));
      for (int j = 0; j < d; ++j)
        drift = std::max(drift, std::fabs(mean_of(v11[j].w)));
      drift = std::max(drift, std::fabs(mean_of(vt10.w)));
      out.max_mean_drift = std::max(out.max_mean_drift, drift);
      const double h1 = h1_norm(d, n, t.dx, v00.w);
      out.sup_h1_v00 = std::max(out.sup_h1_v00, h1);
      h1_sum += h1;
      ++h1_count;
    }

    out.g_times.push_back(tm);
    out.g_values.push_back(g);

    if (m == out.steps) break;

    // Forces from the current level:
    //   f11j = div( dA/dx_j (s + grad v00) )
    //   M[v11] + f10 = sum_j [ d_j(A v11j) + A d_j v11j ]
    //                + sum_k dA/dx_k (s_k + d_k v00)
    for (int j = 0; j < d; ++j)
      div_flux_tbl(t, t.da_half[j], v00.w.data(), s, f11[j].data(), false);
    std::fill(mbuf.begin(), mbuf.end(), 0.0);
    for (int j = 0; j < d; ++j) {
      add_div_product(t, j, t.a_half[j], v11[j].w, mbuf);
      add_weighted_grad(t, j, t.a_node, v11[j].w, 0.0, mbuf);
    }
    for (int kk = 0; kk < d; ++kk)
      add_weighted_grad(t, kk, t.da_node[kk], v00.w, s[kk], mbuf);
    const double phi = mean_of(mbuf);
    for (int i = 0; i < sz; ++i) mbuf[i] -= phi;

    if (m == 0) {
      first_step(v00, b00);
      for (int j = 0; j < d; ++j) first_step(v11[j], f11[j]);
      first_step(vt10, mbuf);
      const double gn = 0.5 * dt * dt * phi;
      g_prev = g;
      g = gn;
    } else {
      advance(v00, b00.data());
      for (int j = 0; j < d; ++j) advance(v11[j], f11[j].data());
      advance(vt10, mbuf.data());
      const double gn = 2.0 * g - g_prev + dt * dt * phi;
      g_prev = g;
      g = gn;
    }
  }

  out.v00 = std::move(v00.w);
  for (int j = 0; j < d; ++j) out.v11[j] = std::move(v11[j].w);
  out.vt10 = std::move(vt10.w);
  out.g_final = g;
  out.avg_h1_v00 = h1_count ? h1_sum / h1_count : 0.0;

  if (k) {
    if (!(mass > 0.0)) throw std::runtime_error("time kernel mass vanished");
    out.d00 = std::move(acc00);
    for (int j = 0; j < d; ++j) out.d11[j] = std::move(acc11[j]);
    out.d10 = std::move(acc10);
    for (double& x : out.d00) x /= mass;
    for (int j = 0; j < d; ++j)
      for (double& x : out.d11[j]) x /= mass;
    for (double& x : out.d10) x /= mass;
    out.g_avg = acc_g / mass;
  }
  (void)g_prev;
  return out;
}

// ---------------------------------------------------------------------
// Box solves on [-L, L] (1D): v0 deviation, v1, v2 and the eps-dependent
// scaled solution, all with periodic wrap and an observation window inside
// the domain of dependence.
// ---------------------------------------------------------------------

struct BoxGrid {
  int n = 0;
  double lo = 0, dx = 0;
};

BoxGrid make_box(double L, int ppu) {
  const double nd = 2.0 * L * ppu;
  const int n = int(std::lround(nd));
  if (std::fabs(nd - n) > 1e-9)
    throw std::invalid_argument("box size 2L must be a whole number of cells");
  return {n, -L, 1.0 / ppu};
}

struct BoxTables {
  std::vector<double> a0;       // A(0, x) at face midpoints
  std::vector<double> c1;       // x dA/dx(0, x) at face midpoints
  std::vector<double> c2;       // x^2 d2A/dx2(0, x) at face midpoints
};

BoxTables build_box_tables(const CoefficientField& f, const BoxGrid& g,
                           int m_max) {
  require_scalar(f);
  if (f.dim != 1)
    throw std::invalid_argument("box expansion experiments are one-dimensional");
  BoxTables t;
  t.a0.resize(g.n);
  if (m_max >= 1) t.c1.resize(g.n);
  if (m_max >= 2) {
    if (!f.slow_hess)
      throw std::invalid_argument("order 2 terms need slow_hess on the field");
    t.c2.resize(g.n);
  }
  for (int i = 0; i < g.n; ++i) {
    const double xh = g.lo + (i + 0.5) * g.dx;
    t.a0[i] = f.eval({0, 0}, {xh, 0}).a11;
    if (m_max >= 1) t.c1[i] = xh * f.slow_grad({0, 0}, {xh, 0})[0].a11;
    if (m_max >= 2) t.c2[i] = xh * xh * f.slow_hess({0, 0}, {xh, 0})[0].a11;
  }
  return t;
}

}  // namespace

BoxTerm solve_v0(const CoefficientField& f, double s, double L, double t_final,
                 int pts_per_unit) {
  return solve_vm(f, s, 0, L, t_final, pts_per_unit).front();
}

std::vector<BoxTerm> solve_vm(const CoefficientField& f, double s, int m,
                              double L, double t_final, int pts_per_unit) {
  if (m < 0 || m > 2) throw std::invalid_argument("solve_vm supports m in {0,1,2}");
  const BoxGrid g = make_box(L, pts_per_unit);
  const BoxTables t = build_box_tables(f, g, m);
  const int n = g.n;

  const double dt0 = 0.5 * g.dx / std::sqrt(f.c2);
  const int steps = std::max(1, int(std::ceil(t_final / dt0 - 1e-12)));
  const double dt = t_final / steps;

  std::vector<double> b0(n, 0.0);
  st::div_flux_1d(n, b0.data(), t.a0.data(), nullptr, s, g.dx, false);

  std::vector<double> w0m(n, 0.0), w0(n, 0.0), w0n(n, 0.0);
  std::vector<double> v1m(n, 0.0), v1(n, 0.0), v1n(n, 0.0);
  std::vector<double> v2m(n, 0.0), v2(n, 0.0), v2n(n, 0.0);
  std::vector<double> force(n, 0.0);

  for (int step = 0; step < steps; ++step) {
    if (m >= 1)
      st::div_flux_1d(n, force.data(), t.c1.data(), w0.data(), s, g.dx, false);
    std::vector<double> force2;
    if (m >= 2) {
      force2.assign(n, 0.0);
      st::div_flux_1d(n, force2.data(), t.c2.data(), w0.data(), s, g.dx, false);
      std::vector<double> tmp(n, 0.0);
      st::div_flux_1d(n, tmp.data(), t.c1.data(), v1.data(), 0.0, g.dx, false);
      for (int i = 0; i < n; ++i) force2[i] += 2.0 * tmp[i];
    }

    if (step == 0) {
      const double h = 0.5 * dt * dt;
      for (int i = 0; i < n; ++i) w0n[i] = h * b0[i];
      if (m >= 1)
        for (int i = 0; i < n; ++i) v1n[i] = h * force[i];
      if (m >= 2)
        for (int i = 0; i < n; ++i) v2n[i] = h * force2[i];
    } else {
      st::lf_step_1d(n, w0m.data(), w0.data(), w0n.data(), t.a0.data(),
                     b0.data(), dt, g.dx);
      if (m >= 1)
        st::lf_step_1d(n, v1m.data(), v1.data(), v1n.data(), t.a0.data(),
                       force.data(), dt, g.dx);
      if (m >= 2)
        st::lf_step_1d(n, v2m.data(), v2.data(), v2n.data(), t.a0.data(),
                       force2.data(), dt, g.dx);
    }
    w0m.swap(w0);
    w0.swap(w0n);
    if (m >= 1) {
      v1m.swap(v1);
      v1.swap(v1n);
    }
    if (m >= 2) {
      v2m.swap(v2);
      v2.swap(v2n);
    }
  }

  std::vector<BoxTerm> out;
  BoxTerm t0{0, n, g.lo, g.dx, t_final, dt, {}};
  t0.values.resize(n);
  for (int i = 0; i < n; ++i) t0.values[i] = s * (g.lo + i * g.dx) + w0[i];
  out.push_back(std::move(t0));
  if (m >= 1) out.push_back(BoxTerm{1, n, g.lo, g.dx, t_final, dt, v1});
  if (m >= 2) out.push_back(BoxTerm{2, n, g.lo, g.dx, t_final, dt, v2});
  return out;
}

double windowed_sup(const BoxTerm& term, double X) {
  double sup = 0.0;
  for (int i = 0; i < term.n; ++i) {
    const double x = term.lo + i * term.dx;
    if (std::fabs(x) <= X) sup = std::max(sup, std::fabs(term.values[i]));
  }
  return sup;
}

ExpansionErrors expansion_error(const CoefficientField& f, double s, int m_max,
                                const std::vector<double>& eps_list, double L,
                                double T, double window, int pts_per_unit) {
  if (m_max < 0 || m_max > 2)
    throw std::invalid_argument("expansion_error supports m up to 2");
  const BoxGrid g = make_box(L, pts_per_unit);
  const BoxTables t = build_box_tables(f, g, m_max);
  const int n = g.n;

  std::vector<int> win_idx;
  for (int i = 0; i < n; ++i)
    if (std::fabs(g.lo + i * g.dx) <= window) win_idx.push_back(i);

  ExpansionErrors out;
  out.eps = eps_list;
  out.E.assign(m_max + 1, std::vector<double>(eps_list.size(), 0.0));

  const double dt0 = 0.5 * g.dx / std::sqrt(f.c2);
  const int steps = std::max(1, int(std::ceil(T / dt0 - 1e-12)));
  const double dt = T / steps;

  for (std::size_t ke = 0; ke < eps_list.size(); ++ke) {
    const double eps = eps_list[ke];
    std::vector<double> aeps(n);
    for (int i = 0; i < n; ++i) {
      const double xh = g.lo + (i + 0.5) * g.dx;
      aeps[i] = f.eval({eps * xh, 0}, {xh, 0}).a11;
    }
    std::vector<double> beps(n, 0.0);
    st::div_flux_1d(n, beps.data(), aeps.data(), nullptr, s, g.dx, false);

    std::vector<double> wem(n, 0.0), we(n, 0.0), wen(n, 0.0);
    std::vector<double> w0m(n, 0.0), w0(n, 0.0), w0n(n, 0.0);
    std::vector<double> v1m(n, 0.0), v1(n, 0.0), v1n(n, 0.0);
    std::vector<double> v2m(n, 0.0), v2(n, 0.0), v2n(n, 0.0);
    std::vector<double> b0(n, 0.0), force(n, 0.0), force2(n, 0.0), tmp(n, 0.0);
    st::div_flux_1d(n, b0.data(), t.a0.data(), nullptr, s, g.dx, false);

    auto monitor = [&]() {
      for (int idx : win_idx) {
        const double err0 = we[idx] - w0[idx];
        out.E[0][ke] = std::max(out.E[0][ke], std::fabs(err0));
        if (m_max >= 1) {
          const double err1 = err0 - eps * v1[idx];
          out.E[1][ke] = std::max(out.E[1][ke], std::fabs(err1));
          if (m_max >= 2)
            out.E[2][ke] =
                std::max(out.E[2][ke], std::fabs(err1 - 0.5 * eps * eps * v2[idx]));
        }
      }
    };

    monitor();
    for (int step = 0; step < steps; ++step) {
      if (m_max >= 1)
        st::div_flux_1d(n, force.data(), t.c1.data(), w0.data(), s, g.dx, false);
      if (m_max >= 2) {
        st::div_flux_1d(n, force2.data(), t.c2.data(), w0.data(), s, g.dx, false);
        st::div_flux_1d(n, tmp.data(), t.c1.data(), v1.data(), 0.0, g.dx, false);
        for (int i = 0; i < n; ++i) force2[i] += 2.0 * tmp[i];
      }
      if (step == 0) {
        const double h = 0.5 * dt * dt;
        for (int i = 0; i < n; ++i) {
          wen[i] = h * beps[i];
          w0n[i] = h * b0[i];
        }
        if (m_max >= 1)
          for (int i = 0; i < n; ++i) v1n[i] = h * force[i];
        if (m_max >= 2)
          for (int i = 0; i < n; ++i) v2n[i] = h * force2[i];
      } else {
        st::lf_step_1d(n, wem.data(), we.data(), wen.data(), aeps.data(),
                       beps.data(), dt, g.dx);
        st::lf_step_1d(n, w0m.data(), w0.data(), w0n.data(), t.a0.data(),
                       b0.data(), dt, g.dx);
        if (m_max >= 1)
          st::lf_step_1d(n, v1m.data(), v1.data(), v1n.data(), t.a0.data(),
                         force.data(), dt, g.dx);
        if (m_max >= 2)
          st::lf_step_1d(n, v2m.data(), v2.data(), v2n.data(), t.a0.data(),
                         force2.data(), dt, g.dx);
      }
      wem.swap(we);
      we.swap(wen);
      w0m.swap(w0);
      w0.swap(w0n);
      if (m_max >= 1) {
        v1m.swap(v1);
        v1.swap(v1n);
      }
      if (m_max >= 2) {
        v2m.swap(v2);
        v2.swap(v2n);
      }
      monitor();
    }
  }
  return out;
}

QuasiPolyParts quasi_poly_decompose(const CoefficientField& f, double s,
                                    double t_final, int cell_n, double cfl) {
  if (f.dim != 1)
    throw std::invalid_argument("quasi_poly_decompose is one-dimensional");
  const Hierarchy h =
      run_hierarchy(f, {s, 0}, cell_n, t_final, cfl, nullptr, 0, 0);
  QuasiPolyParts out;
  out.n = h.n;
  out.dx = h.dx;
  out.dt = h.dt;
  out.t_final = h.t_final;
  out.v00 = h.v00;
  out.v11 = h.v11[0];
  out.v10_tilde = h.vt10;
  out.g_times = h.g_times;
  out.g_values = h.g_values;
  out.g_final = h.g_final;
  out.max_mean_drift = h.max_mean_drift;
  out.sup_h1_v00 = h.sup_h1_v00;
  out.avg_h1_v00 = h.avg_h1_v00;
  return out;
}

std::vector<double> reconstruct_v1(const QuasiPolyParts& parts, double L,
                                   int pts_per_unit) {
  if (parts.n != pts_per_unit)
    throw std::invalid_argument(
        "reconstruct_v1 needs cell_n == pts_per_unit so grids align");
  const BoxGrid g = make_box(L, pts_per_unit);
  std::vector<double> out(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.lo + i * g.dx;
    const int ci = ((i % parts.n) + parts.n) % parts.n;
    out[i] = parts.v10_tilde[ci] + parts.g_final + x * parts.v11[ci];
  }
  return out;
}

TimeAverage time_averages(const CoefficientField& f, const Vec2& s,
                          const kernels::Kernel& k, double eps, double tau,
                          int cell_n, double cfl) {
  if (!(eps > 0) || !(tau > 0) || eps > tau)
    throw std::invalid_argument("time_averages requires 0 < eps <= tau");
  const double horizon = 0.5 * tau / eps;
  const Hierarchy h =
      run_hierarchy(f, s, cell_n, horizon, cfl, &k, eps, tau);
  TimeAverage out;
  out.dim = h.dim;
  out.n = h.n;
  out.eps = eps;
  out.tau = tau;
  out.p = k.p();
  out.q = k.q();
  out.d00 = h.d00;
  out.d11 = {h.d11[0], h.d11[1]};
  out.d10 = h.d10;
  out.g_avg = h.g_avg;
  out.max_mean_drift = h.max_mean_drift;
  return out;
}

AverageResiduals average_residuals(const CoefficientField& f, const Vec2& s,
                                   const TimeAverage& ta) {
  const CellTables t = build_cell_tables(f, ta.n);
  const cell::CellOperator op = cell::make_cell_operator(f, {0, 0}, ta.n);
  const int sz = op.size();
  AverageResiduals out;

  std::vector<double> buf(sz, 0.0);
  op.apply(ta.d00.data(), buf.data());
  op.add_const_flux_div(s, buf.data(), true);
  out.r00 = l2_norm(ta.dim, t.dx, buf);

  const cell::CellSolution chi = cell::solve_cell(f, {0, 0}, ta.n);
  std::vector<double> diff(sz);
  for (int i = 0; i < sz; ++i) {
    double z = 0.0;
    for (int l = 0; l < ta.dim; ++l) z += s[l] * chi.chi[l][i];
    diff[i] = ta.d00[i] - z;
  }
  out.d00_chi_h1 = h1_norm(ta.dim, ta.n, t.dx, diff);

  for (int j = 0; j < ta.dim; ++j) {
    op.apply(ta.d11[j].data(), buf.data());
    div_flux_tbl(t, t.da_half[j], ta.d00.data(), s, buf.data(), true);
    out.r11[j] = l2_norm(ta.dim, t.dx, buf);
  }

  op.apply(ta.d10.data(), buf.data());
  {
    std::vector<double> rhs(sz, 0.0);
    const std::vector<double>* d11p[2] = {&ta.d11[0], &ta.d11[1]};
    for (int j = 0; j < ta.dim; ++j) {
      add_div_product(t, j, t.a_half[j], *d11p[j], rhs);
      add_weighted_grad(t, j, t.a_node, *d11p[j], 0.0, rhs);
    }
    for (int k2 = 0; k2 < ta.dim; ++k2)
      add_weighted_grad(t, k2, t.da_node[k2], ta.d00, s[k2], rhs);
    for (int i = 0; i < sz; ++i) buf[i] += rhs[i];
  }
  const double kc = mean_of(buf);  // the implicit zero-average constant
  for (double& x : buf) x -= kc;
  out.r10 = l2_norm(ta.dim, t.dx, buf);
  return out;
}

FluxDecomposition flux_decomposition(const CoefficientField& f, const Vec2& s,
                                     double eps, double eta,
                                     const kernels::Kernel& k, int cell_n,
                                     int pts_per_eps) {
  require_scalar(f);
  const TimeAverage ta = time_averages(f, s, k, eps, eta, cell_n);
  const int n = ta.n;
  const int d = ta.dim;
  const int sz = d == 1 ? n : n * n;
  const double hc = 1.0 / n;

  // Gradients of the averaged fields on the cell (4th order in 1D).
  std::vector<double> g00x(sz), g00y(d == 2 ? sz : 0);
  std::vector<double> g10x(sz), g10y(d == 2 ? sz : 0);
  std::vector<double> g11x[2], g11y[2];
  if (d == 1) {
    st::grad4_1d(n, g00x.data(), ta.d00.data(), hc);
    st::grad4_1d(n, g10x.data(), ta.d10.data(), hc);
    g11x[0].resize(sz);
    st::grad4_1d(n, g11x[0].data(), ta.d11[0].data(), hc);
  } else {
    st::grad_c_2d(n, g00x.data(), g00y.data(), ta.d00.data(), hc);
    st::grad_c_2d(n, g10x.data(), g10y.data(), ta.d10.data(), hc);
    for (int j = 0; j < 2; ++j) {
      g11x[j].resize(sz);
      g11y[j].resize(sz);
      st::grad_c_2d(n, g11x[j].data(), g11y[j].data(), ta.d11[j].data(), hc);
    }
  }

  // Spatial quadrature step eps/n puts x/eps exactly on cell nodes.
  const double hq = eps * hc;
  const int J = int(std::ceil(0.5 * eta / hq)) + 1;
  const double half_eta = 0.5 * eta;

  FluxDecomposition out;
  double mass = 0.0;
  if (d == 1) {
    double f0 = 0, f1 = 0, del = 0;
    for (int j = -J; j <= J; ++j) {
      const double x = j * hq;
      const double w = k.eval_scaled(half_eta, x) * hq;
      if (w == 0.0) continue;
      const int ci = ((j % n) + n) % n;
      const double a = f.eval({x, 0}, {x / eps, 0}).a11;
      f0 += w * a * (s[0] + g00x[ci]);
      f1 += w * a * (g10x[ci] + ta.d11[0][ci]);
      del += w * x * a * g11x[0][ci];
      mass += w;
    }
    out.F0[0] = f0 / mass;
    out.F1[0] = f1 / mass;
    out.delta[0] = del / mass;
  } else {
    double f0[2] = {0, 0}, f1[2] = {0, 0}, del[2] = {0, 0};
    for (int j1 = -J; j1 <= J; ++j1) {
      const double x1 = j1 * hq;
      const double w1 = k.eval_scaled(half_eta, x1);
      if (w1 == 0.0) continue;
      const int c1 = ((j1 % n) + n) % n;
      for (int j2 = -J; j2 <= J; ++j2) {
        const double x2 = j2 * hq;
        const double w2 = k.eval_scaled(half_eta, x2);
        if (w2 == 0.0) continue;
        const int c2 = ((j2 % n) + n) % n;
        const double w = w1 * w2 * hq * hq;
        const int ci = c1 * n + c2;
        const double a = f.eval({x1, x2}, {x1 / eps, x2 / eps}).a11;
        f0[0] += w * a * (s[0] + g00x[ci]);
        f0[1] += w * a * (s[1] + g00y[ci]);
        f1[0] += w * a * (g10x[ci] + ta.d11[0][ci]);
        f1[1] += w * a * (g10y[ci] + ta.d11[1][ci]);
        del[0] += w * a * (x1 * g11x[0][ci] + x2 * g11x[1][ci]);
        del[1] += w * a * (x1 * g11y[0][ci] + x2 * g11y[1][ci]);
        mass += w;
      }
    }
    for (int i = 0; i < 2; ++i) {
      out.F0[i] = f0[i] / mass;
      out.F1[i] = f1[i] / mass;
      out.delta[i] = del[i] / mass;
    }
  }

  micro::MicroProblem mp;
  mp.field = &f;
  mp.r0 = {0, 0};
  mp.s = s;
  mp.eps = eps;
  mp.eta = eta;
  mp.tau = eta;
  mp.pts_per_eps = pts_per_eps;
  const upscale::FluxVector fv = upscale::hmm_flux(mp, k);
  out.F_hmm = fv.value;
  for (int i = 0; i < d; ++i)
    out.tail[i] = fv.value[i] - (out.F0[i] + eps * out.F1[i] + out.delta[i]);
  return out;
}

}  // namespace hmmwave::expansion
