#include "hmmwave/cell.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hmmwave/stencils.hpp"

namespace hmmwave::cell {

using media::CoefficientField;
using media::Mat;
using media::Vec2;
namespace st = hmmwave::stencil;

void CellOperator::apply(const double* v, double* out) const {
  if (dim == 1) {
    st::div_flux_1d(n, out, cx.data(), v, 0.0, dx, false);
    return;
  }
  st::div_flux_2d(n, out, cx.data(), cy.data(), v, 0.0, 0.0, dx, false);
  if (has_cross) st::div_flux_cross_2d(n, out, cxy.data(), v, 0.0, 0.0, dx);
}

void CellOperator::add_const_flux_div(const Vec2& s, double* out, bool add) const {
  if (dim == 1) {
    st::div_flux_1d(n, out, cx.data(), nullptr, s[0], dx, add);
    return;
  }
  st::div_flux_2d(n, out, cx.data(), cy.data(), nullptr, s[0], s[1], dx, add);
  if (has_cross) st::div_flux_cross_2d(n, out, cxy.data(), nullptr, s[0], s[1], dx);
}

std::vector<double> CellOperator::jacobi_diag() const {
  std::vector<double> d(size());
  const double inv = 1.0 / (dx * dx);
  if (dim == 1) {
    for (int i = 0; i < n; ++i) d[i] = (cx[i] + cx[(i + n - 1) % n]) * inv;
    return d;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int im = (i + n - 1) % n, jm = (j + n - 1) % n;
      d[i * n + j] = (cx[i * n + j] + cx[im * n + j] + cy[i * n + j] +
                      cy[i * n + jm]) *
                     inv;
    }
  return d;
}

CellOperator make_cell_operator(const CoefficientField& f, const Vec2& x, int n) {
  CellOperator op;
  op.dim = f.dim;
  op.n = n;
  op.dx = 1.0 / n;
  const double h = op.dx;
  if (f.dim == 1) {
    op.cx.resize(n);
    for (int i = 0; i < n; ++i)
      op.cx[i] = f.eval(x, {(i + 0.5) * h, 0.0}).a11;
    return op;
  }
  op.cx.resize(n * n);
  op.cy.resize(n * n);
  if (!f.scalar) op.cxy.assign(n * n, 0.0);
  bool any_cross = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      op.cx[i * n + j] = f.eval(x, {(i + 0.5) * h, j * h}).a11;
      op.cy[i * n + j] = f.eval(x, {i * h, (j + 0.5) * h}).a22;
      if (!f.scalar) {
        const double v = f.eval(x, {i * h, j * h}).a12;
        op.cxy[i * n + j] = v;
        any_cross = any_cross || v != 0.0;
      }
    }
  op.has_cross = any_cross;
  if (!any_cross) op.cxy.clear();
  return op;
}

namespace {

void subtract_mean(std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= double(v.size());
  for (double& x : v) x -= m;
}

// PCG for  -div(A grad u) = b  on the mean-free subspace.
struct CgResult {
  int iterations;
  double residual;  // discrete L2
};

CgResult pcg(const CellOperator& op, const std::vector<double>& b,
             std::vector<double>& u, double tol, int max_iter) {
  const int n = op.size();
  const double cellw = op.dim == 1 ? op.dx : op.dx * op.dx;
  std::vector<double> r = b, z(n), p(n), ap(n);
  const std::vector<double> diag = op.jacobi_diag();
  u.assign(n, 0.0);

  auto precond = [&](const std::vector<double>& rr, std::vector<double>& zz) {
    for (int i = 0; i < n; ++i) zz[i] = rr[i] / diag[i];
  };

  precond(r, z);
  p = z;
  double rz = st::dot_blocked(n, r.data(), z.data());
  double res = std::sqrt(st::dot_blocked(n, r.data(), r.data()) * cellw);
  int it = 0;
  while (res > tol && it < max_iter) {
    op.apply(p.data(), ap.data());
    for (int i = 0; i < n; ++i) ap[i] = -ap[i];
    const double pap = st::dot_blocked(n, p.data(), ap.data());
    if (!(pap > 0.0)) break;  // operator lost definiteness; report below
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      u[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    if (++it % 64 == 0) {
      subtract_mean(u);
      subtract_mean(r);
    }
    precond(r, z);
    const double rz_new = st::dot_blocked(n, r.data(), z.data());
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    res = std::sqrt(st::dot_blocked(n, r.data(), r.data()) * cellw);
  }
  subtract_mean(u);
  return {it, res};
}

}  // namespace

CellSolution solve_cell(const CoefficientField& f, const Vec2& x, int n,
                        double tol, int max_iter) {
  if (n < 32) throw std::invalid_argument("solve_cell requires n >= 32");
  const CellOperator op = make_cell_operator(f, x, n);
  const int sz = op.size();
  if (max_iter <= 0) max_iter = 40 * n + 2000;

  CellSolution sol;
  sol.dim = f.dim;
  sol.n = n;
  sol.residual = 0.0;
  for (int l = 0; l < f.dim; ++l) {
    Vec2 el{0, 0};
    el[l] = 1.0;
    std::vector<double> b(sz, 0.0);
    op.add_const_flux_div(el, b.data(), false);  // M chi = div(A e_l)
    subtract_mean(b);
    std::vector<double> chi;
    const CgResult cg = pcg(op, b, chi, tol, max_iter);
    if (cg.residual > 10.0 * tol) {
      throw std::runtime_error(
          "cell solve did not converge: " + std::to_string(cg.iterations) +
          " iterations, residual " + std::to_string(cg.residual));
    }
    sol.iterations = std::max(sol.iterations, cg.iterations);
    sol.residual = std::max(sol.residual, cg.residual);
    sol.chi.push_back(std::move(chi));
  }
  return sol;
}

HomogenizedTensor homogenized_tensor(const CoefficientField& f, const Vec2& x,
                                     int n, double tol) {
  const CellSolution sol = solve_cell(f, x, n, tol);
  const CellOperator op = make_cell_operator(f, x, n);
  const double h = op.dx;

  HomogenizedTensor t;
  t.dim = f.dim;
  t.x = x;
  t.cell_n = n;
  t.residual = sol.residual;

  if (f.dim == 1) {
    // Mean of the discrete edge flux A(chi' + 1); constant in i up to the
    // solver tolerance, and a spectrally accurate harmonic mean.
    const std::vector<double>& chi = sol.chi[0];
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      acc += op.cx[i] * ((chi[ip] - chi[i]) / h + 1.0);
    }
    t.a0 = Mat::scalar(acc / n);
    return t;
  }

  double a0[2][2] = {{0, 0}, {0, 0}};
  for (int l = 0; l < 2; ++l) {
    const std::vector<double>& chi = sol.chi[l];
    const double e1 = l == 0 ? 1.0 : 0.0;
    const double e2 = l == 1 ? 1.0 : 0.0;
    double f1 = 0.0, f2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n, im = (i + n - 1) % n;
      for (int j = 0; j < n; ++j) {
        const int jp = (j + 1) % n, jm = (j + n - 1) % n;
        const int idx = i * n + j;
        f1 += op.cx[idx] * ((chi[ip * n + j] - chi[idx]) / h + e1);
        f2 += op.cy[idx] * ((chi[i * n + jp] - chi[idx]) / h + e2);
        if (op.has_cross) {
          const double g1 = (chi[ip * n + j] - chi[im * n + j]) / (2 * h) + e1;
          const double g2 = (chi[i * n + jp] - chi[i * n + jm]) / (2 * h) + e2;
          f1 += op.cxy[idx] * g2;
          f2 += op.cxy[idx] * g1;
        }
      }
    }
    a0[0][l] = f1 / double(n) / double(n);
    a0[1][l] = f2 / double(n) / double(n);
  }
  t.a0.a11 = a0[0][0];
  t.a0.a22 = a0[1][1];
  t.a0.a12 = 0.5 * (a0[0][1] + a0[1][0]);
  return t;
}

media::Vec2 homogenized_flux(const HomogenizedTensor& t, const Vec2& s) {
  return media::mat_vec(t.a0, s, t.dim);
}

}  // namespace hmmwave::cell
