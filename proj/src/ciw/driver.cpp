#include "driver.hpp"

#include <chrono>
#include <cmath>

#include "ops.hpp"
#include "spectral.hpp"

namespace ciw {

double ParameterLedger::log10_lambda(int q) const {
    return std::pow(b, q) * std::log10(a);
}

double ParameterLedger::log10_delta(int q) const {
    return 3.0 * beta * log10_lambda(1) - 2.0 * beta * log10_lambda(q);
}

double paper_eps_bound(double alpha, double p, double s) {
    double super = 2.0 * alpha / p - alpha - s;
    if (!(super > 0.0))
        throw ConfigError(strformat(
            "ledger: exponents violate the supercriticality condition, alpha + s - 2 alpha/p = "
            "%.6g must be negative",
            -super));
    return std::min({1.0 - alpha, alpha, super}) / 20.0;
}

ParameterLedger make_ledger(const ParameterLedger& in, int n_grid, long N_Lambda) {
    ParameterLedger led = in;
    if (!(led.alpha > 0.0 && led.alpha < 1.0))
        throw ConfigError("ledger: alpha must lie in (0,1)");
    if (!(led.mu > 0.0)) throw ConfigError("ledger: mu must be positive");
    // bulk viscosity constraint nu + 2 mu / d >= 0 is checked per run dim; the
    // weaker d-independent guard here uses d = 3
    if (led.nu + 2.0 * led.mu / 3.0 < 0.0)
        throw ConfigError("ledger: nu + 2 mu/d must be nonnegative");

    if (led.mode == LedgerMode::paper) {
        double bound = paper_eps_bound(led.alpha, led.p_exp, led.s_exp);
        if (!(led.eps > 0.0 && led.eps <= bound))
            throw ConfigError(strformat("ledger: eps must lie in (0, %.6g]", bound));
        if (!(led.b > 1000.0 / led.eps))
            throw ConfigError(strformat("ledger: b = %.6g violates b > 1000/eps = %.6g", led.b,
                                        1000.0 / led.eps));
        double be = led.b * led.eps;
        if (std::fabs(be - std::round(be)) > 1e-9)
            throw ConfigError("ledger: b * eps must be a positive integer");
        if (!(led.beta > 0.0 && led.beta < 1.0 / (100.0 * led.b * led.b)))
            throw ConfigError(strformat("ledger: beta must lie in (0, %.6g)",
                                        1.0 / (100.0 * led.b * led.b)));
        if (!(led.a >= 2.0)) throw ConfigError("ledger: a must be an integer >= 2");
        return led;
    }

    // desk ordering: ell < 1 < sigma < tau < lambda, and resolvability
    if (!(led.ell_x < 1.0))
        throw ConfigError(strformat("ledger: desk ordering fails, ell = %.6g is not < 1",
                                    led.ell_x));
    if (!(led.sigma > 1))
        throw ConfigError(strformat("ledger: desk ordering fails, sigma = %d is not > 1",
                                    led.sigma));
    if (!(led.tau > led.sigma))
        throw ConfigError(strformat("ledger: desk ordering fails, tau = %.6g is not > sigma = %d",
                                    led.tau, led.sigma));
    if (!(double(led.lambda) > led.tau))
        throw ConfigError(strformat(
            "ledger: desk ordering fails, lambda = %ld is not > tau = %.6g", led.lambda, led.tau));
    if (led.lambda * N_Lambda > n_grid / 4)
        throw ConfigError(strformat(
            "ledger: lambda N_Lambda = %ld exceeds n/4 = %d", led.lambda * N_Lambda, n_grid / 4));
    if (!(led.delta_next > 0.0)) throw ConfigError("ledger: delta_next must be positive");
    return led;
}

RelaxedState init_from_transport(const ScalarTimeField& rho0, const VectorTimeField& m0,
                                 const ParameterLedger& led, FlowMode mode) {
    const GridPtr grid = rho0.grid;
    const Grid& g = *grid;
    const int nt = g.nt();
    const bool inc = mode == FlowMode::incompressible;
    const PhysParams ph = led.phys();

    // transport precondition
    VectorTimeField mcopy = m0;
    ScalarTimeField rcopy = rho0;
    double worst = 0.0, scale = 1e-30;
    TimeField<ScalarField> dtr(grid);
    for (int i = 0; i < nt; ++i) {
        ScalarField dm = divergence(m0.s[i]);
        ScalarField dr(grid);
        const double dt = g.dt();
        if (i == 0) {
            axpy(-1.5 / dt, rho0.s[0], dr);
            axpy(2.0 / dt, rho0.s[1], dr);
            axpy(-0.5 / dt, rho0.s[std::min(2, nt - 1)], dr);
        } else if (i == nt - 1) {
            axpy(1.5 / dt, rho0.s[nt - 1], dr);
            axpy(-2.0 / dt, rho0.s[nt - 2], dr);
            axpy(0.5 / dt, rho0.s[std::max(nt - 3, 0)], dr);
        } else {
            axpy(0.5 / dt, rho0.s[i + 1], dr);
            axpy(-0.5 / dt, rho0.s[i - 1], dr);
        }
        worst = std::max(worst, (dr + dm).max_abs());
        scale = std::max({scale, dm.max_abs(), sup_norm(m0.s[i])});
    }
    if (worst > 1e-8 * scale)
        throw AssertionError(strformat(
            "init_from_transport: continuity residual %.3e above 1e-8 relative", worst / scale));
    for (int i = 0; i < nt; ++i) {
        for (double v : rho0.s[i].v)
            if (!(v > 0.0))
                throw AssertionError("init_from_transport: density must be positive");
    }

    RelaxedState st;
    st.q = 0;
    st.rho = rho0;
    st.m = m0;
    st.R = SymTensorTimeField(grid);
    for (int i = 0; i < nt; ++i) {
        ScalarField ri = inc ? ScalarField(grid, 1.0) : reciprocal(rho0.s[i]);
        VectorField B = ri * m0.s[i];
        // linear terms through the inverse divergence
        VectorField lin(grid);
        {
            const double dt = g.dt();
            if (i == 0) {
                axpy(-1.5 / dt, m0.s[0], lin);
                axpy(2.0 / dt, m0.s[1], lin);
                axpy(-0.5 / dt, m0.s[std::min(2, nt - 1)], lin);
            } else if (i == nt - 1) {
                axpy(1.5 / dt, m0.s[nt - 1], lin);
                axpy(-2.0 / dt, m0.s[nt - 2], lin);
                axpy(0.5 / dt, m0.s[std::max(nt - 3, 0)], lin);
            } else {
                axpy(0.5 / dt, m0.s[i + 1], lin);
                axpy(-0.5 / dt, m0.s[i - 1], lin);
            }
        }
        VectorField visc = ph.mu * fractional_laplacian(B, ph.alpha);
        if (!inc) axpy(-(ph.mu + ph.nu), grad_div(B), visc);
        axpy(1.0, visc, lin);

        SymTensorField R0 = inverse_divergence(lin);
        // nonlinear and pressure parts
        SymTensorField NL(grid);
        {
            const int d = g.dim();
            for (int r = 0; r < d; ++r)
                for (int s = r; s < d; ++s)
                    NL.c[SymTensorField::index(r, s, d)] = B.c[r] * m0.s[i].c[s];
        }
        if (inc) {
            axpy(1.0, inv_div_of_div_leray(deviatoric(NL)), R0);
            st.R.s[i] = deviatoric(R0);
        } else {
            axpy(1.0, inv_div_of_div(NL), R0);
            ScalarField P(grid);
            for (std::int64_t p = 0; p < g.points(); ++p)
                P.v[p] = ph.pressure(rho0.s[i].v[p]);
            axpy(1.0, inv_div_of_grad(P), R0);
            st.R.s[i] = std::move(R0);
        }
    }
    return st;
}

IterateResult iterate_once(const RelaxedState& st, const ParameterLedger& led, FlowMode mode) {
    auto t0 = std::chrono::steady_clock::now();
    const GridPtr grid = st.rho.grid;
    const PhysParams ph = led.phys();

    IterateResult out;
    StepDiagnostics& diag = out.diag;
    diag.q = st.q + 1;

    // 1. mollify
    MollifyResult mr = mollify_state(st, led.ell_x, led.ell_t, ph, mode);
    diag.values["equa_me_residual"] = mr.equa_me_residual;
    for (const auto& w : mr.diag.warnings) diag.warnings.push_back(w);
    require(mr.equa_me_residual <= 1e-5,
            strformat("iterate_once: mollified-system residual %.3e above 1e-5",
                      mr.equa_me_residual));

    // 2. amplitudes + perturbation
    auto ds = std::make_shared<const DirectionSet>(build_direction_set(grid->dim()));
    std::shared_ptr<const MollifiedState> ml = mr.state;
    auto pb = build_perturbation(ml, ds, led.construction(mode));
    diag.values["sup_R_over_varrho"] = pb->amps().sup_ratio;

    // 3. identity verification (hard gate)
    diag.identities = verify_cancellations(*pb);
    for (const auto& row : diag.identities.rows) {
        diag.values["identity_" + row.name] = row.residual;
        if (!(row.residual <= row.tolerance))
            throw AssertionError(strformat("iterate_once: identity '%s' residual %.3e above %.1e",
                                           row.name.c_str(), row.residual, row.tolerance));
    }

    // 4. next state
    auto [next, nrep] = assemble_next_state(st, pb);
    diag.values["mass_drift"] = nrep.mass_drift;
    diag.values["rho_min"] = nrep.rho_min;
    diag.values["rho_max"] = nrep.rho_max;
    diag.values["continuity_fastslow"] = nrep.continuity_residual;
    diag.values["support_lo_sample"] = nrep.support_lo;

    // 5. Reynolds stress
    ReynoldsDecomposition rd = assemble_reynolds(next, ph);
    diag.reynolds_norms = rd.norms;
    diag.values["r_iden_selftest"] = rd.selftest_r_iden;
    require(rd.selftest_r_iden <= 1e-8,
            strformat("iterate_once: R = R(div R) self test %.3e above 1e-8",
                      rd.selftest_r_iden));

    // 6. master residual check
    next.R = rd.total;
    diag.residual = residual_check(next, rd.total, ph, mode);
    diag.values["continuity_residual"] = diag.residual.continuity_rel;
    diag.values["momentum_residual"] = diag.residual.momentum_rel;

    // inductive-quantity measurements (reported, not asserted)
    diag.values["rho_CtC1"] = estimate_norm(next.rho, NormSpec::CN(1));
    diag.values["m_C1tx"] = estimate_norm(next.m, NormSpec::CN(1));
    diag.values["R_L1tCx"] = estimate_norm(rd.total, NormSpec::LpC(1.0));
    diag.values["R_C1tx"] = estimate_norm(rd.total, NormSpec::CN(1));
    {
        // deviation norms against the previous level
        ScalarTimeField drho(grid);
        VectorTimeField dm(grid);
        for (int i = 0; i < grid->nt(); ++i) {
            drho.s[i] = next.rho.s[i] - st.rho.s[i];
            dm.s[i] = next.m.s[i] - st.m.s[i];
        }
        diag.values["drho_CtC1"] = estimate_norm(drho, NormSpec::CN(1));
        diag.values["dm_L2tCx"] = estimate_norm(dm, NormSpec::LpC(2.0));
        diag.values["dm_L1tCx"] = estimate_norm(dm, NormSpec::LpC(1.0));
        diag.values["dm_CtHm1"] = estimate_norm(dm, NormSpec::CtHs(-1.0));
    }

    out.next = std::move(next);
    out.R_next = rd.total;
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace ciw
