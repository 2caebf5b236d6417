#pragma once

#include <map>

#include "reynolds.hpp"

namespace ciw {

enum class LedgerMode { paper, desk };

// Parameter ledger. Desk mode carries explicit per-level parameters and the
// sanity ordering ell < 1 < sigma < tau < lambda with lambda N_Lambda <= n/4.
// Paper mode validates the asymptotic formulas and reports the (astronomical)
// values as base-10 logarithms without allocating any fields.
struct ParameterLedger {
    LedgerMode mode = LedgerMode::desk;

    // paper mode inputs
    double a = 2.0;
    double b = 0.0;
    double beta = 0.0;
    double eps = 0.0;

    // desk mode per-level inputs
    long lambda = 5;
    double delta_next = 0.1;
    double ell_x = 0.05;
    double ell_t = 0.0;
    double tau = 3.0;
    int sigma = 2;

    // physical parameters
    double alpha = 0.6;
    double mu = 1.0;
    double nu = 0.5;
    double p_exp = 2.0;
    double s_exp = 0.0;
    PressureLaw pressure;

    PhysParams phys() const { return PhysParams{mu, nu, alpha, pressure}; }
    ConstructionParams construction(FlowMode m) const {
        ConstructionParams c;
        c.delta_next = delta_next;
        c.lambda = lambda;
        c.tau = tau;
        c.sigma = sigma;
        c.mode = m;
        return c;
    }

    // paper-mode log10 values at level q
    double log10_lambda(int q) const;
    double log10_delta(int q) const;
};

struct LedgerConfig {
    LedgerMode mode = LedgerMode::desk;
    std::map<std::string, double> values;  // raw key/value section
};

// Validates and builds the ledger; desk ordering violations and paper-mode
// constraint violations throw ConfigError naming the failed inequality.
ParameterLedger make_ledger(const ParameterLedger& input, int n_grid, long N_Lambda);

// Maximal admissible eps for given (alpha, p, s): (1/20) min{1-a, a, 2a/p-a-s}.
// Throws when the supercriticality condition a + s - 2a/p < 0 fails.
double paper_eps_bound(double alpha, double p, double s);

// q = 0 relaxed state from a smooth transport solution: R_0 collects the full
// momentum defect through the inverse divergence.
RelaxedState init_from_transport(const ScalarTimeField& rho0, const VectorTimeField& m0,
                                 const ParameterLedger& led, FlowMode mode);

struct StepDiagnostics {
    int q = 0;
    std::map<std::string, double> values;   // named measurements
    IdentityReport identities;
    ResidualReport residual;
    std::vector<ReynoldsDecomposition::PartNorm> reynolds_norms;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
};

struct IterateResult {
    RelaxedState next;
    SymTensorTimeField R_next;
    StepDiagnostics diag;
};

// The single step q -> q+1: mollify, amplitudes, perturbation, identity
// verification, next state, Reynolds assembly, residual check. Hard identity
// failures abort with the failing identity named.
IterateResult iterate_once(const RelaxedState& st, const ParameterLedger& led, FlowMode mode);

}  // namespace ciw
