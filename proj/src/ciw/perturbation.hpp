#pragma once

#include <memory>
#include <optional>

#include "blocks.hpp"
#include "geometry.hpp"
#include "mollify.hpp"
#include "norms.hpp"
#include "profile.hpp"

namespace ciw {

enum class FlowMode { compressible, incompressible };

// Smooth cut-off: 1 on [0,1], identity on [2,inf), monotone blend between,
// with z/2 <= chi(z) <= 2z on (1,2).
double chi(double z);

struct PressureLaw {
    double A = 1.0;
    double gamma = 1.4;
    double operator()(double rho) const { return A * std::pow(rho, gamma); }
};

class PerturbationBundle;

// One iterate (rho_q, m_q, R_q). States produced by an iteration step carry
// the construction trace so the residual check can differentiate the fast
// temporal factors exactly.
struct RelaxedState {
    int q = 0;
    ScalarTimeField rho;
    VectorTimeField m;
    SymTensorTimeField R;
    std::shared_ptr<const PerturbationBundle> trace;
};

// Mollified state (rho_l, m_l, R_l, P_l), the commutator stress picked up by
// the mollification, and the scales used.
struct MollifiedState {
    ScalarTimeField rho;
    VectorTimeField m;
    SymTensorTimeField R;
    ScalarTimeField P;
    SymTensorTimeField R_com;
    double ell_x = 0.0;
    double ell_t = 0.0;
};

struct ConstructionParams {
    double delta_next = 0.1;  // target amplitude delta_{q+1}
    long lambda = 5;
    double tau = 3.0;
    int sigma = 2;
    double r0 = 0.5;                 // spatial profile radius
    double base_width = 0.0;         // 0 -> T / (2 |Lambda|)
    FlowMode mode = FlowMode::compressible;
};

// The t-dependent amplitude layer: varrho, the support window f, and the
// amplitude fields a_(k).
struct AmplitudeBundle {
    std::vector<double> varrho;          // per time sample
    std::vector<double> f;               // per time sample, in [0,1]
    std::vector<ScalarTimeField> a;      // per direction
    std::vector<char> on_support;        // ||R_l(t)|| above threshold
    double eps_u = 0.0;
    double delta_next = 0.0;
    double sup_ratio = 0.0;              // max |R_l| / varrho observed
};

AmplitudeBundle build_amplitudes(const MollifiedState& ml, const DirectionSet& ds,
                                 const ConstructionParams& par);

// The constructed perturbation: momentum parts w^(p), w^(c), w^(o), density
// part z. Slow envelopes are tabulated on the time grid, the fast temporal
// factors g_(k), h_(k) are carried in closed form, and the Mikado profile
// factors are carried as sampled closed forms. Exported samples have their
// per-direction slow means removed; `raw` variants keep them (the pointwise
// cancellation identities hold for the raw factors).
class PerturbationBundle {
public:
    PerturbationBundle(GridPtr grid, std::shared_ptr<const DirectionSet> ds,
                       std::shared_ptr<const SpatialProfile> prof,
                       std::shared_ptr<const TemporalProfile> temporal,
                       std::shared_ptr<const MollifiedState> ml, AmplitudeBundle amps,
                       ConstructionParams par);

    const GridPtr& grid() const { return grid_; }
    FlowMode mode() const { return par_.mode; }
    const ConstructionParams& params() const { return par_; }
    const AmplitudeBundle& amps() const { return amps_; }
    const DirectionSet& dirs() const { return *ds_; }
    const TemporalProfile& temporal() const { return *temporal_; }
    const MikadoBlock& block(int k) const { return blocks_[k]; }
    const MollifiedState& mollified() const { return *ml_; }
    const ScalarTimeField& z() const { return z_; }

    int nk() const { return static_cast<int>(blocks_.size()); }
    double g(int k, int i) const { return temporal_->g(k, grid_->time_at(i)); }
    double dg(int k, int i) const { return temporal_->dg(k, grid_->time_at(i)); }
    double h(int k, int i) const { return temporal_->h(k, grid_->time_at(i)); }
    double mean_p(int k, int i) const { return mean_p_[k][i]; }
    const std::array<double, 3>& mean_c(int k, int i) const { return mean_c_[k][i]; }

    // slow envelopes (per direction, per sample)
    ScalarField p_slow(int k, int i) const;       // a_(k) phi_(k)
    VectorField c_slow(int k, int i) const;       // W^c grad a_(k)
    ScalarField theta(int k, int i) const;        // rho_l^{-1} a^2 (or a^2)
    ScalarField V(int k, int i) const;            // k . grad theta
    ScalarField Q(int k, int i) const;            // (k . grad)^2 theta
    VectorField wo_slow(int k, int i) const;      // k V, Leray-projected in
                                                  // incompressible mode

    // materialized samples
    VectorField wp(int i, bool raw = false) const;
    VectorField wc(int i, bool raw = false) const;
    VectorField wo(int i) const;
    VectorField w(int i, bool raw = false) const;

    // fast-slow time derivatives at sample i (exact fast factor, centered
    // differences on the slow envelopes)
    VectorField dwp_dt(int i) const;
    VectorField dwc_dt(int i) const;
    VectorField dwo_dt(int i) const;

    // exact time derivative of z at a node: sigma^{-1} sum_k h Q
    ScalarField dz_dt(int i) const;

    // centered difference of a slow per-direction envelope builder
    template <class Fn>
    auto slow_fd(Fn&& builder, int k, int i) const {
        const int nt = grid_->nt();
        const double dt = grid_->dt();
        if (i == 0) {
            auto a0 = builder(k, 0), a1 = builder(k, 1), a2 = builder(k, std::min(2, nt - 1));
            auto acc = decltype(a0)(grid_);
            axpy(-1.5 / dt, a0, acc);
            axpy(2.0 / dt, a1, acc);
            axpy(-0.5 / dt, a2, acc);
            return acc;
        }
        if (i == nt - 1) {
            auto a0 = builder(k, nt - 1), a1 = builder(k, nt - 2),
                 a2 = builder(k, std::max(nt - 3, 0));
            auto acc = decltype(a0)(grid_);
            axpy(1.5 / dt, a0, acc);
            axpy(-2.0 / dt, a1, acc);
            axpy(0.5 / dt, a2, acc);
            return acc;
        }
        auto ap = builder(k, i + 1);
        auto am = builder(k, i - 1);
        auto acc = decltype(ap)(grid_);
        axpy(0.5 / dt, ap, acc);
        axpy(-0.5 / dt, am, acc);
        return acc;
    }

private:
    GridPtr grid_;
    std::shared_ptr<const DirectionSet> ds_;
    std::shared_ptr<const SpatialProfile> prof_;
    std::shared_ptr<const TemporalProfile> temporal_;
    std::shared_ptr<const MollifiedState> ml_;
    AmplitudeBundle amps_;
    ConstructionParams par_;
    std::vector<MikadoBlock> blocks_;
    std::vector<std::vector<double>> mean_p_;           // per (k, sample): mean of a phi
    std::vector<std::vector<std::array<double, 3>>> mean_c_;  // per (k, sample): mean of W^c grad a
    ScalarTimeField z_;

    void build_means_and_z();
};

// Builds the full perturbation bundle from a mollified state.
std::shared_ptr<PerturbationBundle> build_perturbation(
    const std::shared_ptr<const MollifiedState>& ml, const std::shared_ptr<const DirectionSet>& ds,
    const ConstructionParams& par);

// Residuals of the pointwise cancellation identities, one row per identity.
struct IdentityReport {
    struct Row {
        std::string name;
        double residual = 0.0;   // relative sup residual
        double tolerance = 0.0;
        std::vector<double> per_sample;
    };
    std::vector<Row> rows;
    bool all_pass() const {
        for (const auto& r : rows)
            if (!(r.residual <= r.tolerance)) return false;
        return true;
    }
};

IdentityReport verify_cancellations(const PerturbationBundle& pb);

// rho_{q+1} = rho_l + z, m_{q+1} = m_l + w; asserts mass preservation and
// reports the density bound margins.
struct NextStateReport {
    double mass_drift = 0.0;       // max_t |int rho_{q+1} - int rho_q|
    double rho_min = 0.0, rho_max = 0.0;
    double continuity_residual = 0.0;  // fast-slow route
    int support_lo = 0;            // first active time sample of (grad rho, m)
};

std::pair<RelaxedState, NextStateReport> assemble_next_state(
    const RelaxedState& prev, const std::shared_ptr<const PerturbationBundle>& pb);

}  // namespace ciw
