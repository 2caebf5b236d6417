#pragma once

#include <memory>

#include "field.hpp"
#include "geometry.hpp"
#include "profile.hpp"

namespace ciw {

// A Mikado block for one direction: the pipe profile phi_(k) and the
// potential gradient grad Phi_(k), both sampled from closed forms at the
// collocation nodes. The potential is normalized with (lambda N)^{-2} so the
// exact identity div W^c_(k) = W_(k) holds (row divergence, derivative on the
// second index).
struct MikadoBlock {
    int dir_index = 0;
    std::array<double, 3> k{};            // direction unit vector
    ScalarField phi;                      // phi_(k) at the nodes
    VectorField grad_Phi;                 // grad Phi_(k) at the nodes
    long lambda = 0;
    long freq = 0;                        // lambda * N_Lambda

    // W_(k) = phi_(k) k
    VectorField W() const;
    // W^c v = grad_Phi (k . v) - k (grad_Phi . v), evaluated pointwise
    VectorField Wc_apply(const VectorField& v) const;
    // analytic column divergence d_j W^c_{jl} = -W_l; the row divergence is +W
    VectorField div_Wc_row() const;
};

// Samples the block for direction `which` of the set at frequency lambda.
// Requires integer lambda with lambda * N_Lambda <= n/4.
MikadoBlock make_mikado_block(const GridPtr& grid, const DirectionSet& ds, int which, long lambda,
                              const std::shared_ptr<const SpatialProfile>& prof);

// Closed-form sup norms (fine 1-D scan, independent of the grid).
double mikado_W_sup(const DirectionSet& ds, long lambda, const SpatialProfile& prof);
double mikado_W_c1(const DirectionSet& ds, long lambda, const SpatialProfile& prof);
double mikado_Wc_sup(const DirectionSet& ds, long lambda, const SpatialProfile& prof);
double mikado_phi_cn(const DirectionSet& ds, long lambda, const SpatialProfile& prof, int N);

}  // namespace ciw
