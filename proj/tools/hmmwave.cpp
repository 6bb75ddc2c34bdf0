#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmmwave/cell.hpp"
#include "hmmwave/config.hpp"
#include "hmmwave/csv.hpp"
#include "hmmwave/expansion.hpp"
#include "hmmwave/kernels.hpp"
#include "hmmwave/macro.hpp"
#include "hmmwave/media.hpp"
#include "hmmwave/par.hpp"
#include "hmmwave/rates.hpp"
#include "hmmwave/stencils.hpp"
#include "hmmwave/sweep.hpp"
#include "hmmwave/upscale.hpp"

namespace hw = hmmwave;

namespace {

int cmd_kernel_check(int p, int q, int quad) {
  const hw::kernels::Kernel k(p, q);
  std::printf("kernel p=%d q=%d, support [-1,1], degree %d\n", p, q,
              int(k.coeffs().size()) - 1);
  std::printf("%4s %18s %18s\n", "r", "moment(exact)", "moment(trap)");
  for (int r = 0; r <= p + 2; ++r)
    std::printf("%4d %18.10e %18.10e\n", r, k.moment_exact(r), k.moment(r, quad));
  std::printf("boundary derivatives at x=1:");
  for (int m = 0; m <= q; ++m) std::printf(" %g", k.deriv(1.0, m));
  std::printf("\n");
  return 0;
}

int cmd_cell_solve(const std::string& coeff, const std::vector<double>& x_in,
                   int n, const std::string& dump) {
  const auto field = hw::media::catalog(coeff);
  hw::media::Vec2 x{0, 0};
  for (std::size_t i = 0; i < x_in.size() && i < 2; ++i) x[i] = x_in[i];
  const auto sol = hw::cell::solve_cell(field, x, n);
  const auto t = hw::cell::homogenized_tensor(field, x, n);
  if (field.dim == 1) {
    std::printf("A0 = %.12e\n", t.a0.a11);
  } else {
    std::printf("A0 = [%.12e %.12e; %.12e %.12e]\n", t.a0.a11, t.a0.a12,
                t.a0.a12, t.a0.a22);
  }
  for (int l = 0; l < field.dim; ++l) {
    double nrm = 0, mean = 0;
    for (double v : sol.chi[l]) {
      nrm += v * v;
      mean += v;
    }
    const double cellw = field.dim == 1 ? 1.0 / n : 1.0 / double(n) / n;
    std::printf("chi_%d: L2 = %.6e, mean = %.3e\n", l + 1,
                std::sqrt(nrm * cellw), mean / sol.chi[l].size());
  }
  std::printf("cg iterations = %d, residual = %.3e\n", sol.iterations,
              sol.residual);
  if (!dump.empty()) {
    if (field.dim == 1)
      hw::csv::write_field_1d(dump, "chi1", 0.0, 1.0 / n, sol.chi[0]);
    else
      hw::csv::write_field_2d(dump, "chi1", 0.0, 1.0 / n, n, sol.chi[0]);
    std::printf("corrector written to %s\n", dump.c_str());
  }
  return 0;
}

int cmd_upscale(const std::string& coeff, double eps, double eta, double tau,
                int p, int q, std::vector<double> slope, std::vector<double> r0v,
                int ppe, int cell_n, const std::string& dump, int stride) {
  const auto field = hw::media::catalog(coeff);
  hw::micro::MicroProblem mp;
  mp.field = &field;
  for (std::size_t i = 0; i < r0v.size() && i < 2; ++i) mp.r0[i] = r0v[i];
  mp.s = {1, 0};
  for (std::size_t i = 0; i < slope.size() && i < 2; ++i) mp.s[i] = slope[i];
  mp.eps = eps;
  mp.eta = eta;
  mp.tau = tau > 0 ? tau : eta;
  mp.pts_per_eps = ppe;
  const hw::kernels::Kernel k(p, q);

  if (!dump.empty()) {
    const auto sol = hw::micro::solve_micro(mp, k, stride);
    // t,x[,y],w rows for every stored step
    std::vector<std::vector<double>> cols;
    std::vector<std::string> names;
    if (field.dim == 1) {
      names = {"t", "x", "w"};
      cols.assign(3, {});
      for (std::size_t s = 0; s < sol.history.size(); ++s)
        for (int i = 0; i < sol.n; ++i) {
          cols[0].push_back(sol.history_t[s]);
          cols[1].push_back(sol.lo + i * sol.dx);
          cols[2].push_back(sol.history[s][i]);
        }
    } else {
      names = {"t", "x", "y", "w"};
      cols.assign(4, {});
      for (std::size_t s = 0; s < sol.history.size(); ++s)
        for (int i = 0; i < sol.n; ++i)
          for (int j = 0; j < sol.n; ++j) {
            cols[0].push_back(sol.history_t[s]);
            cols[1].push_back(sol.lo + i * sol.dx);
            cols[2].push_back(sol.lo + j * sol.dx);
            cols[3].push_back(sol.history[s][i * sol.n + j]);
          }
    }
    hw::csv::write_table(dump, names, cols);
    std::printf("micro history written to %s\n", dump.c_str());
  }

  const auto f = hw::upscale::hmm_flux(mp, k);
  if (field.dim == 1)
    std::printf("F     = %.12e\n", f.value[0]);
  else
    std::printf("F     = (%.12e, %.12e)\n", f.value[0], f.value[1]);
  const auto ref = hw::upscale::reference_flux(field, mp.r0, mp.s, cell_n);
  if (field.dim == 1)
    std::printf("Fhat  = %.12e\n", ref.value[0]);
  else
    std::printf("Fhat  = (%.12e, %.12e)\n", ref.value[0], ref.value[1]);
  std::printf("error = %.6e\n", hw::upscale::upscaling_error(f, ref));
  return 0;
}

double preset_g(const std::string& name, int dim, const hw::media::Vec2& x) {
  if (name == "zero") return 0.0;
  if (name == "sin") {
    double v = std::sin(M_PI * x[0]);
    if (dim == 2) v *= std::sin(M_PI * x[1]);
    return v;
  }
  if (name == "bump") {
    double v = x[0] * (1.0 - x[0]);
    if (dim == 2) v *= x[1] * (1.0 - x[1]);
    return v;
  }
  throw std::runtime_error("unknown initial-data preset: " + name +
                           " (known: zero, sin, bump)");
}

int cmd_macro_run(const std::string& path, const std::string& out_prefix) {
  const auto cfg_file = hw::config::Config::load(path);
  const std::string sec = "macro";
  hw::macroscale::MacroConfig mc;
  mc.dim = cfg_file.get_int(sec, "dim", 1);
  mc.lo = cfg_file.get_double(sec, "lo", 0.0);
  mc.hi = cfg_file.get_double(sec, "hi", 1.0);
  mc.cells = cfg_file.get_int(sec, "cells", 16);
  mc.cfl = cfg_file.get_double(sec, "cfl", 0.5);
  mc.dt = cfg_file.get_double(sec, "dt", 0.0);
  mc.T = cfg_file.get_double(sec, "T", 1.0);
  mc.cell_n = cfg_file.get_int(sec, "cell_n", mc.dim == 1 ? 256 : 128);
  const std::string mode = cfg_file.get(sec, "flux_mode", "reference");
  if (mode == "reference")
    mc.mode = hw::macroscale::FluxMode::reference;
  else if (mode == "hmm")
    mc.mode = hw::macroscale::FluxMode::hmm;
  else
    throw std::runtime_error("flux_mode must be reference or hmm");
  static hw::media::CoefficientField field =
      hw::media::catalog(cfg_file.get(sec, "coeff", "constant"));
  field = hw::media::catalog(cfg_file.get(sec, "coeff", "constant"));
  mc.field = &field;
  mc.micro.eps = cfg_file.get_double(sec, "micro_eps", 1e-3);
  mc.micro.eta = cfg_file.get_double(sec, "micro_eta", 1e-2);
  mc.micro.tau = cfg_file.get_double(sec, "micro_tau", mc.micro.eta);
  mc.micro.p = cfg_file.get_int(sec, "micro_p", 3);
  mc.micro.q = cfg_file.get_int(sec, "micro_q", 6);
  mc.micro.pts_per_eps = cfg_file.get_int(sec, "micro_pts_per_eps", 32);
  const std::string gname = cfg_file.get(sec, "g", "sin");
  const std::string hname = cfg_file.get(sec, "h", "zero");
  const int dim = mc.dim;
  mc.g = [gname, dim](const hw::media::Vec2& x) { return preset_g(gname, dim, x); };
  mc.h = [hname, dim](const hw::media::Vec2& x) { return preset_g(hname, dim, x); };
  mc.snapshot_times = cfg_file.get_list(sec, "snapshots");

  const auto res = hw::macroscale::run_macro(mc);
  std::printf("macro run: %d steps to T=%.6g, dt=%.6g, H=%.6g\n", res.steps,
              res.t_final, res.dt, res.H);

  auto dump = [&](const std::string& tag, const std::vector<double>& u) {
    const std::string file = out_prefix + "-" + tag + ".csv";
    if (res.dim == 1)
      hw::csv::write_field_1d(file, "U", res.lo, res.H, u);
    else
      hw::csv::write_field_2d(file, "U", res.lo, res.H, res.nx, u);
    std::printf("wrote %s\n", file.c_str());
  };
  for (const auto& snap : res.snapshots) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "t%.4f", snap.t);
    dump(tag, snap.u);
  }
  dump("final", res.u);
  return 0;
}

int cmd_convergence(const std::string& path) {
  const auto cfg_file = hw::config::Config::load(path);
  const std::string sec = "convergence";
  hw::sweep::ExperimentConfig sc;
  sc.coeff = cfg_file.get(sec, "coeff", sc.coeff);
  sc.p = cfg_file.get_int(sec, "p", sc.p);
  sc.q = cfg_file.get_int(sec, "q", sc.q);
  sc.eta = cfg_file.get_double(sec, "eta", sc.eta);
  sc.tau = cfg_file.get_double(sec, "tau", sc.eta);
  sc.eps_list = cfg_file.get_list(sec, "eps");
  sc.dyadic_k_min = cfg_file.get_int(sec, "dyadic_k_min", 1);
  sc.dyadic_k_max = cfg_file.get_int(sec, "dyadic_k_max", 6);
  sc.beta = cfg_file.get_double(sec, "beta", -1.0);
  sc.pts_per_eps = cfg_file.get_int(sec, "pts_per_eps", 32);
  sc.cell_n = cfg_file.get_int(sec, "cell_n", 1024);
  sc.sweep_var = cfg_file.get(sec, "sweep_var", "eps");
  sc.parallel_points = cfg_file.get_bool(sec, "parallel_points", true);
  sc.output = cfg_file.get(sec, "output", "convergence.csv");
  auto r0 = cfg_file.get_list(sec, "r0");
  for (std::size_t i = 0; i < r0.size() && i < 2; ++i) sc.r0[i] = r0[i];
  auto sl = cfg_file.get_list(sec, "slope");
  for (std::size_t i = 0; i < sl.size() && i < 2; ++i) sc.slope[i] = sl[i];
  if (sc.beta > 0 && !(sc.beta < 2.0 / 7.0))
    throw std::runtime_error("coupled schedule requires beta < 2/7");

  const auto recs = hw::sweep::run(sc);
  for (const auto& r : recs)
    std::printf("  %-12.6e  %.6e\n", r.sweep_var, r.error);
  try {
    const auto fit = hw::rates::fit_rate(recs);
    std::printf("fitted slope = %.4f (residual %.4f, %d points)\n", fit.slope,
                fit.max_residual, fit.points_used);
  } catch (const std::exception& e) {
    std::printf("no slope fit: %s\n", e.what());
  }
  std::printf("wrote %s\n", sc.output.c_str());
  return 0;
}

int cmd_expansion(const std::string& experiment, const std::string& path,
                  std::string output) {
  hw::config::Config cfg_file;
  if (!path.empty()) cfg_file = hw::config::Config::load(path);
  const std::string sec = "expansion";
  const std::string coeff =
      cfg_file.get(sec, "coeff", "locally-periodic-1d-simple");
  const auto field = hw::media::catalog(coeff);
  const double s = cfg_file.get_double(sec, "slope", 1.0);
  if (output.empty()) output = "expansion-" + experiment + ".csv";

  if (experiment == "fig2") {
    std::vector<double> eps = cfg_file.get_list(sec, "eps");
    if (eps.empty())
      for (int k = 2; k <= 6; ++k) eps.push_back(std::pow(2.0, -k));
    const int m_max = cfg_file.get_int(sec, "m_max", 2);
    const int ppu = cfg_file.get_int(sec, "pts_per_unit", 512);
    const auto errs = hw::expansion::expansion_error(field, s, m_max, eps, 3.0,
                                                     1.0, 1.5, ppu);
    std::vector<std::string> names = {"eps"};
    std::vector<std::vector<double>> cols = {errs.eps};
    std::vector<std::string> footer;
    for (int m = 0; m <= m_max; ++m) {
      names.push_back("E" + std::to_string(m));
      cols.push_back(errs.E[m]);
      const auto fit = hw::rates::fit_loglog(errs.eps, errs.E[m]);
      char buf[96];
      std::snprintf(buf, sizeof buf, "fitted_slope_E%d=%.6f", m, fit.slope);
      footer.push_back(buf);
      std::printf("E%d slope = %.4f (expect %d)\n", m, fit.slope, m + 1);
    }
    hw::csv::write_table(output, names, cols, footer);
  } else if (experiment == "fig3") {
    const double L = cfg_file.get_double(sec, "L", 30.0);
    const double t = cfg_file.get_double(sec, "t", 0.5);
    const int ppu = cfg_file.get_int(sec, "pts_per_unit", 128);
    const auto v0 = hw::expansion::solve_v0(field, s, L, t, ppu);
    std::vector<double> xs(v0.n), v00(v0.n);
    for (int i = 0; i < v0.n; ++i) {
      xs[i] = v0.lo + i * v0.dx;
      v00[i] = v0.values[i] - s * xs[i];
    }
    hw::csv::write_table(output, {"x", "v0", "v00"}, {xs, v0.values, v00});
    std::printf("v0 profile at t=%.3f written; sup |v00| = %.4e\n", t,
                hw::stencil::max_abs(v0.n, v00.data()));
  } else if (experiment == "fig4") {
    const double L = cfg_file.get_double(sec, "L", 30.0);
    const double t = cfg_file.get_double(sec, "t", 0.5);
    const int ppu = cfg_file.get_int(sec, "pts_per_unit", 128);
    const auto terms = hw::expansion::solve_vm(field, s, 2, L, t, ppu);
    std::vector<double> X, sup1, sup2;
    const double margin = t * std::sqrt(field.c2) + 0.5;
    for (double w = 2.0; w <= L - margin; w *= 2.0) {
      X.push_back(w);
      sup1.push_back(hw::expansion::windowed_sup(terms[1], w));
      sup2.push_back(hw::expansion::windowed_sup(terms[2], w));
    }
    std::vector<std::string> footer;
    for (int m = 1; m <= 2; ++m) {
      const auto fit = hw::rates::fit_loglog(X, m == 1 ? sup1 : sup2);
      char buf[96];
      std::snprintf(buf, sizeof buf, "growth_exponent_v%d=%.6f", m, fit.slope);
      footer.push_back(buf);
      std::printf("v%d growth exponent = %.4f (expect %d)\n", m, fit.slope, m);
    }
    hw::csv::write_table(output, {"X", "sup_v1", "sup_v2"}, {X, sup1, sup2},
                         footer);
  } else if (experiment == "time-averages") {
    const int p = cfg_file.get_int(sec, "p", 3);
    const int q = cfg_file.get_int(sec, "q", 4);
    const int n = cfg_file.get_int(sec, "cell_n", 512);
    const double eta = cfg_file.get_double(sec, "eta", 0.01);
    std::vector<double> alphas = cfg_file.get_list(sec, "alpha");
    if (alphas.empty()) alphas = {0.5, 0.25, 0.125, 0.0625};
    const hw::kernels::Kernel k(p, q);
    std::vector<double> r00s, chis, r11s, r10s;
    for (double a : alphas) {
      const auto ta =
          hw::expansion::time_averages(field, {s, 0}, k, a * eta, eta, n);
      const auto res = hw::expansion::average_residuals(field, {s, 0}, ta);
      r00s.push_back(res.r00);
      chis.push_back(res.d00_chi_h1);
      r11s.push_back(res.r11[0]);
      r10s.push_back(res.r10);
      std::printf("alpha=%.4f: r00=%.3e |d00-chi|_H1=%.3e r11=%.3e r10=%.3e\n",
                  a, res.r00, res.d00_chi_h1, res.r11[0], res.r10);
    }
    std::vector<std::string> footer;
    const char* names[] = {"r00", "d00_chi_h1", "r11", "r10"};
    const std::vector<double>* series[] = {&r00s, &chis, &r11s, &r10s};
    for (int i = 0; i < 4; ++i) {
      const auto fit = hw::rates::fit_loglog(alphas, *series[i]);
      char buf[96];
      std::snprintf(buf, sizeof buf, "fitted_slope_%s=%.6f", names[i], fit.slope);
      footer.push_back(buf);
      std::printf("%s slope = %.4f\n", names[i], fit.slope);
    }
    hw::csv::write_table(output, {"alpha", "r00", "d00_chi_h1", "r11", "r10"},
                         {alphas, r00s, chis, r11s, r10s}, footer);
  } else if (experiment == "flux-decomp") {
    const int p = cfg_file.get_int(sec, "p", 3);
    const int q = cfg_file.get_int(sec, "q", 4);
    const int n = cfg_file.get_int(sec, "cell_n", 512);
    const double eta = cfg_file.get_double(sec, "eta", 0.01);
    std::vector<double> alphas = cfg_file.get_list(sec, "alpha");
    if (alphas.empty()) alphas = {0.5, 0.25, 0.125, 0.0625};
    const hw::kernels::Kernel k(p, q);
    const auto a0 =
        hw::cell::homogenized_tensor(field, {0, 0}, std::max(1024, n));
    std::vector<double> e0s, f1s, tails;
    for (double a : alphas) {
      const auto d = hw::expansion::flux_decomposition(field, {s, 0}, a * eta,
                                                       eta, k, n);
      e0s.push_back(std::fabs(d.F0[0] - a0.a0.a11 * s));
      f1s.push_back(std::fabs(d.F1[0]));
      tails.push_back(std::fabs(d.tail[0]));
      std::printf("alpha=%.4f: |F0-A0 s|=%.3e |F1|=%.3e |tail|=%.3e\n", a,
                  e0s.back(), f1s.back(), tails.back());
    }
    std::vector<std::string> footer;
    const auto fit0 = hw::rates::fit_loglog(alphas, e0s);
    const auto fit1 = hw::rates::fit_loglog(alphas, f1s);
    char buf[96];
    std::snprintf(buf, sizeof buf, "fitted_slope_F0=%.6f", fit0.slope);
    footer.push_back(buf);
    std::snprintf(buf, sizeof buf, "fitted_slope_F1=%.6f", fit1.slope);
    footer.push_back(buf);
    std::printf("|F0 - A0 s| slope = %.4f, |F1| slope = %.4f\n", fit0.slope,
                fit1.slope);
    hw::csv::write_table(output, {"alpha", "F0_err", "F1_abs", "tail_abs"},
                         {alphas, e0s, f1s, tails}, footer);
  } else {
    std::fprintf(stderr,
                 "unknown experiment '%s' (known: fig2, fig3, fig4, "
                 "time-averages, flux-decomp)\n",
                 experiment.c_str());
    return 2;
  }
  std::printf("wrote %s\n", output.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference heterogeneous multiscale solver for waves "
               "in locally periodic media"};
  app.require_subcommand(1);

  int jobs = 0;
  bool serial = false;
  long seed = 0;
  app.add_option("--jobs", jobs, "max worker threads (1 = serial)");
  app.add_flag("--serial", serial, "disable the OpenMP kernels");
  app.add_option("--seed", seed, "reserved; the pipeline is deterministic");

  auto* kc = app.add_subcommand("kernel", "averaging-kernel utilities");
  auto* kcc = kc->add_subcommand("check", "print the moment table");
  int kp = 3, kq = 6, kquad = 100001;
  kcc->add_option("--p", kp, "vanishing moments")->required();
  kcc->add_option("--q", kq, "smoothness order")->required();
  kcc->add_option("--quad-points", kquad, "trapezoid nodes");

  auto* cs = app.add_subcommand("cell-solve", "solve the periodic cell problems");
  std::string cs_coeff = "periodic-1d", cs_dump;
  std::vector<double> cs_x;
  int cs_n = 0;
  cs->add_option("--coeff", cs_coeff, "catalog coefficient")->required();
  cs->add_option("--x", cs_x, "macro point (1 or 2 reals)");
  cs->add_option("--n", cs_n, "cell grid points per axis");
  cs->add_option("--dump", cs_dump, "corrector CSV path");

  auto* up = app.add_subcommand("upscale", "one micro solve + kernel-averaged flux");
  std::string up_coeff = "periodic-1d", up_dump;
  double up_eps = 1e-3, up_eta = 1e-2, up_tau = -1;
  int up_p = 3, up_q = 6, up_ppe = 32, up_cell = 1024, up_stride = 0;
  std::vector<double> up_slope, up_r0;
  up->add_option("--coeff", up_coeff)->required();
  up->add_option("--eps", up_eps)->required();
  up->add_option("--eta", up_eta)->required();
  up->add_option("--tau", up_tau, "defaults to eta");
  up->add_option("--p", up_p);
  up->add_option("--q", up_q);
  up->add_option("--slope", up_slope, "slope vector");
  up->add_option("--r0", up_r0, "macro point");
  up->add_option("--pts-per-eps", up_ppe);
  up->add_option("--cell-n", up_cell, "reference cell resolution");
  up->add_option("--dump-micro", up_dump, "micro-field CSV path");
  up->add_option("--dump-stride", up_stride, "steps between stored fields");

  auto* mr = app.add_subcommand("macro-run", "run the macro solver from a config");
  std::string mr_cfg, mr_out = "macro";
  mr->add_option("--config", mr_cfg)->required();
  mr->add_option("--output", mr_out, "output prefix");

  auto* ex = app.add_subcommand("expansion", "expansion-hierarchy experiments");
  std::string ex_name, ex_cfg, ex_out;
  ex->add_option("--experiment", ex_name,
                 "fig2 | fig3 | fig4 | time-averages | flux-decomp")
      ->required();
  ex->add_option("--config", ex_cfg);
  ex->add_option("--output", ex_out);

  auto* cv = app.add_subcommand("convergence", "upscaling-error sweep");
  std::string cv_cfg;
  cv->add_option("--config", cv_cfg)->required();

  CLI11_PARSE(app, argc, argv);

  if (serial || jobs == 1) hw::exec::set_parallel(false);
  if (jobs > 0) hw::exec::set_threads(jobs);

  try {
    if (kcc->parsed()) return cmd_kernel_check(kp, kq, kquad);
    if (cs->parsed()) {
      const auto f = hw::media::catalog(cs_coeff);
      if (cs_n <= 0) cs_n = f.dim == 1 ? 256 : 128;
      return cmd_cell_solve(cs_coeff, cs_x, cs_n, cs_dump);
    }
    if (up->parsed())
      return cmd_upscale(up_coeff, up_eps, up_eta, up_tau, up_p, up_q, up_slope,
                         up_r0, up_ppe, up_cell, up_dump, up_stride);
    if (mr->parsed()) return cmd_macro_run(mr_cfg, mr_out);
    if (ex->parsed()) return cmd_expansion(ex_name, ex_cfg, ex_out);
    if (cv->parsed()) return cmd_convergence(cv_cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::fprintf(stderr, "error: no subcommand\n");
  return 2;
}
