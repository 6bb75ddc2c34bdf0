#pragma once

#include <string>
#include <vector>

#include "hmmwave/media.hpp"
#include "hmmwave/rates.hpp"

namespace hmmwave::sweep {

/// One upscaling-error sweep: for each eps, the micro problem is solved and
/// |F - Fhat|_inf recorded against the homogenized reference.
struct ExperimentConfig {
  std::string name = "convergence";
  std::string coeff = "periodic-1d";
  int p = 3, q = 6;
  double eta = 0.01, tau = 0.01;
  std::vector<double> eps_list;  // explicit; empty selects the dyadic default
  int dyadic_k_min = 1, dyadic_k_max = 6;  // eps = eta 2^-k
  double beta = -1.0;  // > 0: coupled schedule eta = tau = eps^{1-beta}
  media::Vec2 r0{0, 0};
  media::Vec2 slope{1, 0};
  int pts_per_eps = 32;
  double cfl = 0.5;
  int cell_n = 1024;            // reference resolution
  std::string sweep_var = "eps";  // "eps" or "alpha" (= eps/eta)
  bool parallel_points = true;
  std::string output;  // CSV path; empty skips emission
};

/// Runs the sweep; failed points are skipped with a warning on stderr and
/// the sweep aborts when fewer than 4 points survive. Records are sorted by
/// sweep_var ascending and identical for parallel and serial execution.
std::vector<rates::ConvergenceRecord> run(const ExperimentConfig& cfg);

/// Deterministic CSV emission with a fitted-slope footer (fit over points
/// above the floor; omitted when the fit is impossible).
void emit(const std::vector<rates::ConvergenceRecord>& recs,
          const std::string& path, double fit_floor = 1e-11);

}  // namespace hmmwave::sweep
