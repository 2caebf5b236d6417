#pragma once

#include "perturbation.hpp"

namespace ciw {

struct PhysParams {
    double mu = 1.0;
    double nu = 0.5;
    double alpha = 0.6;
    PressureLaw pressure;
};

struct MollifyResult {
    std::shared_ptr<MollifiedState> state;
    double equa_me_residual = 0.0;  // relative, against the largest term
    MollifyDiagnostics diag;
};

// Mollifies (rho_q, m_q, R_q) and assembles the commutator stress. The
// mollified system residual is measured and must stay below 1e-5.
MollifyResult mollify_state(const RelaxedState& st, double ell_x, double ell_t,
                            const PhysParams& ph, FlowMode mode);

struct ReynoldsDecomposition {
    SymTensorTimeField lin, osc1, osc2, osc3, cor, pre, com;
    SymTensorTimeField total;

    struct PartNorm {
        std::string name;
        double l1_c = 0.0;  // L^1_t C_x estimate
        double sup = 0.0;
    };
    std::vector<PartNorm> norms;
    double selftest_r_iden = 0.0;  // sup |R - R(div R)| / sup|R|
};

// The five-part stress of the step: each part is R applied to a mean-free
// derivative-form argument, so div(total) reproduces the momentum defect of
// the constructed state exactly in the workbench calculus.
ReynoldsDecomposition assemble_reynolds(const RelaxedState& next, const PhysParams& ph);

struct ResidualReport {
    double continuity_rel = 0.0;
    double momentum_rel = 0.0;
    std::vector<double> continuity_per_sample;
    std::vector<double> momentum_per_sample;
};

// Master check: evaluates both equations of the relaxed system at the state's
// own level on the grid. Uses the construction trace (when present) to
// differentiate fast temporal factors exactly; slow envelopes use centered
// differences.
ResidualReport residual_check(const RelaxedState& st, const SymTensorTimeField& R,
                              const PhysParams& ph, FlowMode mode);

}  // namespace ciw
