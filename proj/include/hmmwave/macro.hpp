#pragma once

#include <functional>
#include <vector>

#include "hmmwave/media.hpp"
#include "hmmwave/micro.hpp"

namespace hmmwave::macroscale {

enum class FluxMode { reference, hmm };

struct MicroParams {
  double eps = 1e-3, eta = 1e-2, tau = 1e-2;
  int p = 3, q = 6;
  int pts_per_eps = 32;
  double cfl = 0.5;
};

/// Macro solver configuration on the cube (lo, hi)^dim with homogeneous
/// Dirichlet data. H = (hi-lo)/cells; dt defaults to cfl*H/sqrt(c2).
struct MacroConfig {
  int dim = 1;
  double lo = 0.0, hi = 1.0;
  int cells = 16;
  double cfl = 0.5;
  double dt = 0.0;  // > 0 overrides the CFL choice (still validated)
  double T = 1.0;
  FluxMode mode = FluxMode::reference;
  const media::CoefficientField* field = nullptr;
  int cell_n = 256;    // reference-mode cell resolution
  MicroParams micro;   // hmm-mode micro parameters
  std::function<double(const media::Vec2&)> g;            // initial value
  std::function<double(const media::Vec2&)> h;            // initial velocity
  std::function<double(double, const media::Vec2&)> f;    // source, may be null
  std::vector<double> snapshot_times;
};

struct MacroSnapshot {
  double t = 0;
  std::vector<double> u;
};

struct MacroResult {
  int dim = 1;
  int nx = 0;  // nodes per axis including boundary
  double lo = 0, H = 0;
  double dt = 0, t_final = 0;
  int steps = 0;
  std::vector<double> u;
  std::vector<MacroSnapshot> snapshots;
};

/// Edge slope of the coarse field. 1D: forward difference across edge i.
/// 2D: gradient of the unweighted least-squares plane through the 6-point
/// stencil straddling the edge (reduced 4-point stencil at domain rows).
double local_slope_1d(const std::vector<double>& u, int nx, int i, double H);
media::Vec2 local_slope_2d(const std::vector<double>& u, int nx, int axis, int i,
                           int j, double H);

/// Per-edge constitutive matrices: unit-slope fluxes from the configured
/// mode, computed once up front (the micro problem is linear in the slope)
/// and reused at every time step. x-independent coefficients share one entry.
struct FluxTable {
  bool shared = false;
  media::Mat single;
  std::vector<media::Mat> x_edges;  // 1D: all edges; 2D: axis-0 edges
  std::vector<media::Mat> y_edges;
  const media::Mat& at(int axis, int k) const {
    if (shared) return single;
    return axis == 0 ? x_edges[k] : y_edges[k];
  }
};

FluxTable build_flux_table(const MacroConfig& cfg);

/// U^0 = g and the Taylor first step
/// U^1 = U^0 + dt h + (dt^2/2)(div F(., grad U^0) + f(0, .)).
struct MacroState {
  std::vector<double> u_prev, u;
  double t = 0;
  int step = 0;
};

MacroState init_first_step(const MacroConfig& cfg, const FluxTable& table,
                           double dt);
void step_macro(const MacroConfig& cfg, const FluxTable& table, double dt,
                MacroState& st);

MacroResult run_macro(const MacroConfig& cfg);

/// Max relative drift of the conserved leap-frog quadratic form over a
/// forcing-free reference run.
double macro_energy_drift(const MacroConfig& cfg);

}  // namespace hmmwave::macroscale
