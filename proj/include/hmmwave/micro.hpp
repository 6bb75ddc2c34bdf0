#pragma once

#include <vector>

#include "hmmwave/kernels.hpp"
#include "hmmwave/media.hpp"

namespace hmmwave::micro {

/// One local wave simulation around a macro point: linear initial data of
/// slope s, coefficient A(x + r0, (x + r0)/eps) on the shifted box
/// [-L_eta, L_eta]^d, evolved to time tau/2.
struct MicroProblem {
  const media::CoefficientField* field = nullptr;
  media::Vec2 r0{0, 0};
  media::Vec2 s{1, 0};
  double eps = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  double L_eta = 0.0;  // <= 0 selects eta/2 + (tau/2) sqrt(c2) plus margin
  int pts_per_eps = 32;
  double cfl = 0.5;
};

struct MicroSolution {
  int dim = 1;
  int n = 0;        // nodes per axis; node n/2 sits at the box center
  double lo = 0.0;  // box [lo, lo + n*dx)
  double dx = 0.0;
  double dt = 0.0;
  int steps = 0;
  double c2 = 0.0;
  /// K_{tau/2}-weighted time average of the deviation w = u - s.x,
  /// normalized by the discrete kernel mass. The time symmetry u(-t) = u(t)
  /// doubles the t > 0 weights, so only [0, tau/2] is simulated.
  std::vector<double> wbar;
  /// Debug history (every stride-th step) when requested.
  std::vector<double> history_t;
  std::vector<std::vector<double>> history;
};

/// Leap-frog solve with periodic boundary conditions on the deviation
/// w = u - s.x; the affine part enters as the static forcing div(A s).
/// Throws on CFL or box-size violations.
MicroSolution solve_micro(const MicroProblem& p, const kernels::Kernel& time_kernel,
                          int history_stride = 0);

/// Simulates the t < 0 branch explicitly and compares it with the t > 0
/// branch at matching times; the production path relies on this symmetry
/// and never simulates negative times.
double check_time_symmetry(const MicroProblem& p, const kernels::Kernel& time_kernel,
                           int compare_stride = 16);

/// Maximum relative drift of the conserved leap-frog quadratic form over a
/// forcing-free evolution started from a smooth bump. Exercises the same
/// stepper as solve_micro.
double energy_drift_probe(const media::CoefficientField& f, const media::Vec2& r0,
                          double eps, double box_half_width, int n, double cfl,
                          int steps);

}  // namespace hmmwave::micro
