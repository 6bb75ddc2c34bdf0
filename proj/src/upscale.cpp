#include "hmmwave/upscale.hpp"

#include <cmath>
#include <stdexcept>

#include "hmmwave/stencils.hpp"

namespace hmmwave::upscale {

using media::Mat;
using media::Vec2;
namespace st = hmmwave::stencil;

FluxVector hmm_flux(const micro::MicroProblem& p, const kernels::Kernel& k) {
  const micro::MicroSolution sol = micro::solve_micro(p, k);
  const media::CoefficientField& f = *p.field;
  const int n = sol.n;
  const double dx = sol.dx;
  const double half_eta = 0.5 * p.eta;

  FluxVector out;
  out.dim = f.dim;
  out.r0 = p.r0;
  out.s = p.s;
  out.eps = p.eps;
  out.eta = p.eta;
  out.tau = p.tau;
  out.p = k.p();
  out.q = k.q();
  out.pts_per_eps = p.pts_per_eps;

  if (f.dim == 1) {
    std::vector<double> grad(n);
    st::grad_c_1d(n, grad.data(), sol.wbar.data(), dx);
    double acc = 0.0, mass = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sol.lo + i * dx;
      const double w = k.eval_scaled(half_eta, x) * dx;
      if (w == 0.0) continue;
      const Vec2 xs{x + p.r0[0], 0.0};
      const double a = f.eval(xs, {xs[0] / p.eps, 0.0}).a11;
      acc += w * a * (p.s[0] + grad[i]);
      mass += w;
    }
    if (!(mass > 0.0)) throw std::runtime_error("spatial kernel mass vanished");
    out.value[0] = acc / mass;
  } else {
    std::vector<double> gx(n * n), gy(n * n);
    st::grad_c_2d(n, gx.data(), gy.data(), sol.wbar.data(), dx);
    double acc1 = 0.0, acc2 = 0.0, mass = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x1 = sol.lo + i * dx;
      const double w1 = k.eval_scaled(half_eta, x1);
      if (w1 == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        const double x2 = sol.lo + j * dx;
        const double w2 = k.eval_scaled(half_eta, x2);
        if (w2 == 0.0) continue;
        const double w = w1 * w2 * dx * dx;
        const int idx = i * n + j;
        const Vec2 xs{x1 + p.r0[0], x2 + p.r0[1]};
        const Mat a = f.eval(xs, {xs[0] / p.eps, xs[1] / p.eps});
        const Vec2 g{p.s[0] + gx[idx], p.s[1] + gy[idx]};
        acc1 += w * (a.a11 * g[0] + a.a12 * g[1]);
        acc2 += w * (a.a12 * g[0] + a.a22 * g[1]);
        mass += w;
      }
    }
    if (!(mass > 0.0)) throw std::runtime_error("spatial kernel mass vanished");
    out.value[0] = acc1 / mass;
    out.value[1] = acc2 / mass;
  }

  for (int d = 0; d < f.dim; ++d)
    if (!std::isfinite(out.value[d]))
      throw std::runtime_error("hmm flux is not finite");
  return out;
}

double upscaling_error(const FluxVector& f, const FluxVector& ref) {
  if (f.dim != ref.dim) throw std::invalid_argument("flux dimension mismatch");
  for (int d = 0; d < f.dim; ++d) {
    if (std::fabs(f.r0[d] - ref.r0[d]) > 1e-14 ||
        std::fabs(f.s[d] - ref.s[d]) > 1e-14)
      throw std::invalid_argument("flux metadata mismatch: r0 or slope differ");
  }
  double e = 0.0;
  for (int d = 0; d < f.dim; ++d)
    e = std::max(e, std::fabs(f.value[d] - ref.value[d]));
  return e;
}

FluxVector reference_flux(const media::CoefficientField& f, const Vec2& r0,
                          const Vec2& s, int cell_n) {
  const cell::HomogenizedTensor t = cell::homogenized_tensor(f, r0, cell_n);
  FluxVector out;
  out.dim = f.dim;
  out.r0 = r0;
  out.s = s;
  out.value = cell::homogenized_flux(t, s);
  return out;
}

}  // namespace hmmwave::upscale
