#pragma once

#include <vector>

#include "hmmwave/media.hpp"

namespace hmmwave::cell {

/// Discrete periodic elliptic operator  v -> div( A(x, y) grad v )  on the
/// unit-cell grid with the slow variable frozen at x. Diagonal entries are
/// sampled at cell-face midpoints, cross entries at nodes.
struct CellOperator {
  int dim = 1;
  int n = 0;
  double dx = 0.0;
  std::vector<double> cx, cy;   // edge tables
  std::vector<double> cxy;      // node table, empty for scalar fields
  bool has_cross = false;

  int size() const { return dim == 1 ? n : n * n; }

  /// out = div(A grad v)
  void apply(const double* v, double* out) const;
  /// out (+)= div(A s) for a constant slope s
  void add_const_flux_div(const media::Vec2& s, double* out, bool add = true) const;
  /// Jacobi diagonal of -div(A grad .)
  std::vector<double> jacobi_diag() const;
};

CellOperator make_cell_operator(const media::CoefficientField& f,
                                const media::Vec2& x, int n);

struct CellSolution {
  int dim = 1;
  int n = 0;
  std::vector<std::vector<double>> chi;  // one zero-mean corrector per axis
  double residual = 0.0;                 // discrete L2 residual at exit
  int iterations = 0;
};

struct HomogenizedTensor {
  int dim = 1;
  media::Mat a0;
  media::Vec2 x{0, 0};
  int cell_n = 0;
  double residual = 0.0;
};

/// Solves the periodic cell problems div(A grad chi_l + A e_l) = 0 with the
/// zero-mean constraint, by Jacobi-preconditioned conjugate gradients on the
/// mean-free subspace. Requires n >= 32.
CellSolution solve_cell(const media::CoefficientField& f, const media::Vec2& x,
                        int n, double tol = 1e-11, int max_iter = 0);

/// A0_ij(x) assembled from the correctors via the discrete cell fluxes.
HomogenizedTensor homogenized_tensor(const media::CoefficientField& f,
                                     const media::Vec2& x, int n,
                                     double tol = 1e-11);

media::Vec2 homogenized_flux(const HomogenizedTensor& t, const media::Vec2& s);

}  // namespace hmmwave::cell
