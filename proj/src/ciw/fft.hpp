#pragma once

#include <complex>
#include <vector>

#include "grid.hpp"

namespace ciw {

using cplx = std::complex<double>;

// Forward r2c transform, normalized so that f(x) = sum_xi coef(xi) e^{i xi.x}
// over the full (Hermitian-extended) spectrum. A constant field c has
// coef = c at xi = 0 and nothing else.
std::vector<cplx> fft_forward(const Grid& g, const std::vector<double>& phys);

// Inverse of fft_forward (exact round trip up to rounding).
std::vector<double> fft_inverse(const Grid& g, const std::vector<cplx>& coef);

// Inverse transform of a full (non-Hermitian) coefficient array laid out
// row-major over per-axis indices j with frequency j <= n/2 ? j : j - n.
// Returns complex values sum_xi coef(xi) e^{i xi.x} at the nodes.
std::vector<cplx> fft_full_inverse(const Grid& g, const std::vector<cplx>& full_coef);

}  // namespace ciw
