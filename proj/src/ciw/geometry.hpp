#pragma once

#include <array>
#include <vector>

#include "util.hpp"

namespace ciw {

// Finite rational direction sets realizing the rank-one decomposition of
// symmetric matrices near the identity: S = sum_k gamma_k(S)^2 k (x) k for S
// in the Frobenius ball B_eps_u(Id). Exactly dim Sym(d) directions are used,
// so the coefficients solve a square linear system and the gamma_k are smooth
// wherever positive.

struct Direction {
    // orthonormal frame rows (k, k1[, k2]) as integers over a common
    // denominator; all entries of den * row are integral
    std::array<std::array<long, 3>, 3> frame_num;
    long den;

    std::array<double, 3> unit(int row) const {
        return {double(frame_num[row][0]) / den, double(frame_num[row][1]) / den,
                double(frame_num[row][2]) / den};
    }
};

struct DirectionSet {
    int dim = 0;
    std::vector<Direction> dirs;       // size d(d+1)/2
    long N_Lambda = 0;                 // N * k and N * k_i are integer vectors
    std::vector<double> M;             // vec(S) = M c, row-major square matrix
    std::vector<double> M_inv;
    double cond_M = 0.0;               // 1-norm condition estimate
    std::vector<double> c_id;          // coefficients of the identity
    double eps_u = 0.0;                // positivity radius (with safety 0.9)

    int count() const { return static_cast<int>(dirs.size()); }

    // c = M^{-1} vec(S); vec uses the sym component order (i <= j)
    void solve_coeffs(const double* vecS, double* c) const;
};

DirectionSet build_direction_set(int d);

// gamma_k(S) = sqrt(c_k(S)). Throws when ||S - Id||_F > eps_u or when a
// coefficient is not positive.
std::vector<double> gamma_coefficients(const DirectionSet& ds, const std::vector<double>& vecS);

// ||S - Id||_F from the packed representation
double frob_dist_to_id(int d, const std::vector<double>& vecS);

}  // namespace ciw
