#pragma once

#include "driver.hpp"

namespace ciw {

struct ScalingReport {
    std::string experiment;
    std::vector<double> x;
    std::vector<double> y;
    LineFit fit;
    std::map<std::string, double> extra;
};

struct ScalingConfig {
    int n = 128;
    int nt = 33;
    double T = 1.0;
    double p_exp = 2.0;
    double eps_holder = 0.25;
    double alpha = 0.6;
    double mu = 1.0;
    double nu = 0.5;
    std::uint64_t seed = 7;
};

// Experiments: gk | wprin | wc_ratio | stationary_phase | decorrelation |
// osc1 | osc2 | euler_vanishing. Ladders must have >= 3 points.
ScalingReport scaling_ladder(const std::string& experiment, const std::vector<double>& ladder,
                             const ScalingConfig& cfg);

// Exact stationary-phase probe: ||R(theta e^{i lambda xi . x})||_{C^eps}
// across the ladder, via the shifted-symbol evaluation.
ScalingReport stationary_phase_probe(const ScalarField& theta, const std::array<int, 3>& xi,
                                     const std::vector<double>& lambdas, double eps_holder);

// Vanishing-viscosity probe: mollifies a rough Euler pair at scales 1/lambda_n
// and measures the L^1_t C_x size of the residual stress.
ScalingReport euler_mollification_reynolds(const ScalarTimeField& rho, const VectorTimeField& m,
                                           const std::vector<double>& lambdas,
                                           const PhysParams& ph);

}  // namespace ciw
