#pragma once

#include "hmmwave/cell.hpp"
#include "hmmwave/kernels.hpp"
#include "hmmwave/media.hpp"
#include "hmmwave/micro.hpp"

namespace hmmwave::upscale {

struct FluxVector {
  media::Vec2 value{0, 0};
  media::Vec2 r0{0, 0};
  media::Vec2 s{0, 0};
  int dim = 1;
  double eps = 0, eta = 0, tau = 0;
  int p = 0, q = 0, pts_per_eps = 0;
};

/// HMM flux: space-time kernel average of A grad u over the micro solution.
/// The averaging window is [-eta/2, eta/2]^d x [-tau/2, tau/2] (kernels
/// scaled to half-width eta/2 and tau/2), fitting the micro box bound.
/// Quadrature nodes coincide with micro grid nodes and time steps; discrete
/// kernel masses are normalized so a constant medium is reproduced exactly.
FluxVector hmm_flux(const micro::MicroProblem& p, const kernels::Kernel& k);

/// Max-norm difference |F - Fref|_inf. Throws when r0, slope or dimension
/// disagree between the two fluxes.
double upscaling_error(const FluxVector& f, const FluxVector& ref);

/// Homogenized flux A0(r0) s wrapped as a FluxVector for comparisons.
FluxVector reference_flux(const media::CoefficientField& f, const media::Vec2& r0,
                          const media::Vec2& s, int cell_n);

}  // namespace hmmwave::upscale
