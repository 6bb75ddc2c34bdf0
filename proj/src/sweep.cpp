#include "hmmwave/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hmmwave/csv.hpp"
#include "hmmwave/kernels.hpp"
#include "hmmwave/par.hpp"
#include "hmmwave/upscale.hpp"

namespace hmmwave::sweep {

using rates::ConvergenceRecord;

std::vector<ConvergenceRecord> run(const ExperimentConfig& cfg) {
  const media::CoefficientField field = media::catalog(cfg.coeff);
  const kernels::Kernel kernel(cfg.p, cfg.q);

  std::vector<double> eps_list = cfg.eps_list;
  if (eps_list.empty()) {
    for (int k = cfg.dyadic_k_min; k <= cfg.dyadic_k_max; ++k)
      eps_list.push_back(cfg.eta * std::pow(2.0, -k));
  }
  if (eps_list.size() < 4)
    throw std::invalid_argument("sweep needs at least 4 points");

  // The reference flux depends on r0 only; one cell solve serves the sweep.
  const upscale::FluxVector ref =
      upscale::reference_flux(field, cfg.r0, cfg.slope, cfg.cell_n);

  const int npts = int(eps_list.size());
  std::vector<ConvergenceRecord> recs(npts);
  std::vector<char> ok(npts, 0);
  std::vector<std::string> errors(npts);

  auto run_point = [&](int i) {
    const double eps = eps_list[i];
    micro::MicroProblem mp;
    mp.field = &field;
    mp.r0 = cfg.r0;
    mp.s = cfg.slope;
    mp.eps = eps;
    if (cfg.beta > 0.0) {
      mp.eta = std::pow(eps, 1.0 - cfg.beta);
      mp.tau = mp.eta;
    } else {
      mp.eta = cfg.eta;
      mp.tau = cfg.tau;
    }
    mp.pts_per_eps = cfg.pts_per_eps;
    mp.cfl = cfg.cfl;
    const upscale::FluxVector f = upscale::hmm_flux(mp, kernel);
    const double err = upscale::upscaling_error(f, ref);

    ConvergenceRecord r;
    r.sweep_var = cfg.sweep_var == "alpha" ? eps / mp.eta : eps;
    r.error = err;
    r.meta = {{"eps", csv::format_sci(eps)},
              {"eta", csv::format_sci(mp.eta)},
              {"tau", csv::format_sci(mp.tau)},
              {"p", std::to_string(cfg.p)},
              {"q", std::to_string(cfg.q)},
              {"pts_per_eps", std::to_string(cfg.pts_per_eps)},
              {"coeff", cfg.coeff},
              {"dim", std::to_string(field.dim)}};
    recs[i] = std::move(r);
    ok[i] = 1;
  };

  if (cfg.parallel_points && exec::use_omp()) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < npts; ++i) {
      try {
        run_point(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  } else {
    for (int i = 0; i < npts; ++i) {
      try {
        run_point(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  }

  std::vector<ConvergenceRecord> out;
  for (int i = 0; i < npts; ++i) {
    if (ok[i]) {
      out.push_back(std::move(recs[i]));
    } else {
      std::fprintf(stderr, "warning: sweep point eps=%g failed: %s\n",
                   eps_list[i], errors[i].c_str());
    }
  }
  if (out.size() < 4)
    throw std::runtime_error("sweep failed: fewer than 4 points survived");
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.sweep_var < b.sweep_var; });
  if (!cfg.output.empty()) emit(out, cfg.output);
  return out;
}

void emit(const std::vector<ConvergenceRecord>& recs, const std::string& path,
          double fit_floor) {
  rates::RateFit fit;
  bool have_fit = true;
  try {
    fit = rates::fit_rate(recs, fit_floor);
  } catch (const std::exception&) {
    have_fit = false;
  }
  csv::write_convergence(path, recs, have_fit ? &fit : nullptr);
}

}  // namespace hmmwave::sweep
