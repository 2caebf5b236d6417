#pragma once

#include "spectral.hpp"

namespace ciw {

// Nonlocal Fourier-symbol operators: the order -1 inverse divergence, the
// Helmholtz-Leray projector, and spectral mode filters.

// R maps mean-free vector fields to symmetric trace-free tensors with
// div(R v) = v. Throws if the input mean exceeds 1e-12 * sup|v|.
SymTensorField inverse_divergence(const VectorField& v);

// Composed forms R(div A), R(grad f), R(grad div u), R((-Delta)^a u), and
// R(P_H div A). The leading symbol annihilates the mean, so no mean check is
// needed.
SymTensorField inv_div_of_div(const SymTensorField& a);
SymTensorField inv_div_of_grad(const ScalarField& f);
SymTensorField inv_div_of_graddiv(const VectorField& u);
SymTensorField inv_div_of_fraclap(const VectorField& u, double alpha);
SymTensorField inv_div_of_div_leray(const SymTensorField& a);

VectorField leray_project(const VectorField& v);

ScalarField nonzero_modes(const ScalarField& f);
VectorField nonzero_modes(const VectorField& f);
SymTensorField nonzero_modes(const SymTensorField& f);
ScalarField high_pass(const ScalarField& f, double cutoff);

// Exact evaluation of R(v e^{i K.x}) for a slow envelope v and an integer
// modulation frequency K: the symbol is evaluated at the true shifted
// frequencies, so no grid aliasing enters. Returns the real and imaginary
// parts of the (complex) modulated tensor.
std::pair<SymTensorField, SymTensorField> modulated_inverse_divergence(
    const VectorField& v, const std::array<int, 3>& K);

}  // namespace ciw
