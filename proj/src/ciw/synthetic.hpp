#pragma once

#include <cstdint>
#include <random>

#include "field.hpp"

namespace ciw {

// Band-limited trigonometric polynomials with exact point evaluation; the
// workhorse for synthetic states and for direct-summation oracles.
struct TrigPoly {
    struct Mode {
        std::array<int, 3> xi;
        double amp;
        double phase;
    };
    std::vector<Mode> modes;

    double eval(const double* x, int d) const;
    ScalarField sample(const GridPtr& g) const;
    TrigPoly derivative(int axis) const;

    static TrigPoly random(int d, int kmax, int count, std::uint64_t seed, bool mean_free = true);
};

// Divergence-free band-limited vector field from a stream potential (d=2) or
// a vector potential's curl restricted to two components (d=3).
VectorField solenoidal_sample(const GridPtr& g, const TrigPoly& stream, int pair_axis = 2);

// A smooth transport pair: rho constant in t with div m = 0 exactly on the
// grid and m = b(t) * curl(stream). The time envelope b is a C^inf bump
// supported in [T/4, 3T/4], tabulated at the time nodes.
struct TransportPair {
    ScalarTimeField rho;
    VectorTimeField m;
};
TransportPair make_transport_pair(const GridPtr& g, double rho_contrast, double m_amp,
                                  std::uint64_t seed, bool time_windowed = true);

// Lacunary Hoelder-rough fields of regularity beta in (0,1): partial
// Weierstrass sums with frequencies 2^j up to kmax.
ScalarField lacunary_scalar(const GridPtr& g, double beta, int kmax, std::uint64_t seed);
// Rough density/momentum pair satisfying the continuity equation exactly
// (rho constant in t, m solenoidal with a rough stream function).
TransportPair make_rough_pair(const GridPtr& g, double beta, int kmax, std::uint64_t seed);

}  // namespace ciw
