#pragma once

#include <array>
#include <functional>

#include "field.hpp"

namespace ciw {

// Spectral calculus on collocation fields. Operators act on the truncated
// Fourier interpolant; modes with any |xi_axis| = n/2 are annihilated so that
// odd symbols stay conjugate-symmetric (plain transforms keep them).

struct Spectrum {
    GridPtr grid;
    std::vector<cplx> c;
};

Spectrum to_spectral(const ScalarField& f);
ScalarField to_physical(const Spectrum& s);

// coefficient at a given signed frequency (reads the stored half-spectrum)
cplx coefficient(const Spectrum& s, std::array<int, 3> xi);

// sum over the full spectrum of |coef|^2 (Parseval: equals grid mean of f^2)
double spectral_energy(const Spectrum& s);

// Applies a multiplier m(xi); m must map conjugate frequencies to conjugate
// values. Nyquist planes are zeroed.
ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<cplx(const std::array<int, 3>&)>& m);

// d^|zeta| / dx^zeta, |zeta| <= 6
ScalarField derivative(const ScalarField& f, const std::array<int, 3>& zeta);

// (-Delta)^alpha, alpha in (0,1]; the xi=0 mode is annihilated
ScalarField fractional_laplacian(const ScalarField& f, double alpha);
VectorField fractional_laplacian(const VectorField& f, double alpha);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& f);
VectorField divergence(const SymTensorField& a);  // (div A)_j = d_i A_ij
VectorField grad_div(const VectorField& f);
ScalarField laplacian_inv(const ScalarField& f);  // zero mean enforced

// zero the xi = 0 coefficient
ScalarField remove_mean(const ScalarField& f);

// project onto the range of the spectral calculus (Nyquist planes removed);
// residual measurements happen after this projection
ScalarField nyquist_project(const ScalarField& f);
VectorField nyquist_project(const VectorField& f);

// H^s norm from the spectrum, s in [-2,2]: sqrt(sum (1+|xi|^2)^s |coef|^2)
double sobolev_norm(const ScalarField& f, double s);

}  // namespace ciw
