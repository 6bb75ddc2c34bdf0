#pragma once

#include <array>
#include <vector>

#include "hmmwave/kernels.hpp"
#include "hmmwave/media.hpp"

namespace hmmwave::expansion {

// Numerical realization of the slow/fast expansion hierarchy: the terms
// v_0 = s.x + v00, v_m (m = 1, 2) on a truncated box, their periodic
// quasi-polynomial components on the unit cell, the kernel time averages
// d00 / d11j / d10, and the flux decomposition built from them. The slow
// variable is frozen at the origin throughout. Scalar coefficients only.

/// One expansion term on the periodic box [-L, L] (1D studies).
struct BoxTerm {
  int order = 0;
  int n = 0;
  double lo = 0, dx = 0;
  double t_final = 0, dt = 0;
  std::vector<double> values;  // order 0 carries the full v0 = s x + v00
};

/// v0 on [-L, L]: deviation-from-linear evolution with periodic wrap.
BoxTerm solve_v0(const media::CoefficientField& f, double s, double L,
                 double t_final, int pts_per_unit = 512);

/// Terms v_0 .. v_m co-evolved on one grid (m <= 2; m = 2 needs slow_hess).
std::vector<BoxTerm> solve_vm(const media::CoefficientField& f, double s, int m,
                              double L, double t_final, int pts_per_unit = 512);

/// sup |v| over the sub-window |x| <= X (growth-in-space studies).
double windowed_sup(const BoxTerm& term, double X);

struct ExpansionErrors {
  std::vector<double> eps;
  /// E[m][k]: max over [0,T] x [-window, window] of |v(eps_k) - vtilde_m|
  std::vector<std::vector<double>> E;
};

/// Truncation error of vtilde_m = sum_{k<=m} eps^k/k! v_k against the
/// eps-dependent scaled solution, co-evolved on one grid.
ExpansionErrors expansion_error(const media::CoefficientField& f, double s,
                                int m_max, const std::vector<double>& eps_list,
                                double L = 3.0, double T = 1.0,
                                double window = 1.5, int pts_per_unit = 512);

/// Periodic components of v1 = v10 + y v11 (1D), with v10 split into the
/// zero-mean part and the mean g(t) integrated alongside.
struct QuasiPolyParts {
  int n = 0;
  double dx = 0, dt = 0, t_final = 0;
  std::vector<double> v00, v11, v10_tilde;
  std::vector<double> g_times, g_values;
  double g_final = 0;
  double max_mean_drift = 0;  // worst cell mean seen across the zero-mean fields
  double sup_h1_v00 = 0, avg_h1_v00 = 0;
};

QuasiPolyParts quasi_poly_decompose(const media::CoefficientField& f, double s,
                                    double t_final, int cell_n,
                                    double cfl = 0.5);

/// v1 on [-L, L] reconstructed from the periodic parts; requires the cell
/// grid to divide the box grid (cell_n == pts_per_unit).
std::vector<double> reconstruct_v1(const QuasiPolyParts& parts, double L,
                                   int pts_per_unit);

/// Kernel time averages of the cell hierarchy at scale ratio alpha = eps/tau.
struct TimeAverage {
  int dim = 1, n = 0;
  double eps = 0, tau = 0;
  int p = 0, q = 0;
  std::vector<double> d00;
  std::array<std::vector<double>, 2> d11;
  std::vector<double> d10;
  double g_avg = 0;
  double max_mean_drift = 0;
};

TimeAverage time_averages(const media::CoefficientField& f, const media::Vec2& s,
                          const kernels::Kernel& k, double eps, double tau,
                          int cell_n, double cfl = 0.5);

/// Residuals of the elliptic equations satisfied by the time averages, and
/// the H1 distance between d00 and the corrector combination sum s_l chi_l.
struct AverageResiduals {
  double r00 = 0;          // || div(A grad d00) + div(A s) ||_L2(Y)
  double d00_chi_h1 = 0;
  std::array<double, 2> r11{0, 0};
  double r10 = 0;          // after removing the mean (the implicit constant)
};

AverageResiduals average_residuals(const media::CoefficientField& f,
                                   const media::Vec2& s, const TimeAverage& ta);

/// F = F0 + eps F1 + delta + tail, with F0/F1/delta assembled from the time
/// averages by spatial kernel quadrature and the tail reported against the
/// upscaled flux at matching parameters.
struct FluxDecomposition {
  media::Vec2 F0{0, 0}, F1{0, 0}, delta{0, 0};
  media::Vec2 F_hmm{0, 0}, tail{0, 0};
};

FluxDecomposition flux_decomposition(const media::CoefficientField& f,
                                     const media::Vec2& s, double eps, double eta,
                                     const kernels::Kernel& k, int cell_n,
                                     int pts_per_eps = 32);

}  // namespace hmmwave::expansion
