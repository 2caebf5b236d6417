#pragma once

#include <string>
#include <vector>

#include "field.hpp"

namespace ciw {

struct MollifyDiagnostics {
    std::vector<std::string> warnings;
};

// Fourier coefficient of the 1-D mollifier psi_l at integer frequency k:
// int psi_l(s) e^{-iks} ds, real by symmetry, exactly 1 at k = 0.
double mollifier_symbol(double ell, int k);

// Spatial mollification: convolution with the tensor-product bump of width
// ell per axis, supported in [-ell, ell]^d. The xi = 0 coefficient is
// untouched, so the spatial mean is preserved exactly.
ScalarField mollify_space(const ScalarField& f, double ell);

// Time mollification: discrete convolution with the bump of width ell_t,
// sampled on grid offsets, weights normalized to sum 1. Samples outside
// [0,T] are clamped to the boundary values. ell_t < dt degenerates to the
// identity.
template <class F>
TimeField<F> mollify_time(const TimeField<F>& f, double ell_t);

// Full space-time mollification per the workbench convention.
// Unresolvable ell_x (< 4 grid cells) produces a warning record; the
// computation proceeds.
template <class F>
TimeField<F> mollify(const TimeField<F>& f, double ell_x, double ell_t,
                     MollifyDiagnostics* diag = nullptr);

}  // namespace ciw
