#include "perturbation.hpp"

#include <cmath>
#include <limits>

#include "ops.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace ciw {

double chi(double z) {
    if (z < 0.0) throw Error("chi: negative argument");
    if (z <= 1.0) return 1.0;
    if (z >= 2.0) return z;
    auto B = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
    double u = z - 1.0;
    double s = B(u) / (B(u) + B(1.0 - u));
    return 1.0 + s * (z - 1.0);
}

namespace {

const CumulativeSpline& bump_cdf() {
    static const CumulativeSpline c = cumulative_spline([](double v) { return bump(v); }, -1.0,
                                                        1.0, 1 << 12);
    return c;
}

// fraction of the (unit-normalized) bump mass below v
double bump_cdf_frac(double v) { return bump_cdf()(v) / bump_cdf().total(); }

// temporal window: mollified indicator of the dilated support runs
std::vector<double> support_window(const std::vector<char>& on, const Grid& g, double ell) {
    const int nt = g.nt();
    std::vector<double> f(nt, 0.0);
    // collect maximal support runs, dilate by ell/2
    std::vector<std::pair<double, double>> runs;
    int i = 0;
    while (i < nt) {
        if (!on[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < nt && on[j + 1]) ++j;
        runs.push_back({g.time_at(i) - ell / 2.0, g.time_at(j) + ell / 2.0});
        i = j + 1;
    }
    if (runs.empty()) return f;
    // merge overlaps
    std::vector<std::pair<double, double>> merged{runs.front()};
    for (size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, runs[r].second);
        else
            merged.push_back(runs[r]);
    }
    const double w = ell / 4.0;  // mollifier half-width
    for (int s = 0; s < nt; ++s) {
        double t = g.time_at(s);
        double acc = 0.0;
        for (auto [lo, hi] : merged)
            acc += bump_cdf_frac((t - lo) / w) - bump_cdf_frac((t - hi) / w);
        acc = std::min(std::max(acc, 0.0), 1.0);
        if (acc >= 1.0 - 1e-9) acc = 1.0;
        if (acc <= 1e-12) acc = 0.0;
        f[s] = acc;
    }
    return f;
}

}  // namespace

AmplitudeBundle build_amplitudes(const MollifiedState& ml, const DirectionSet& ds,
                                 const ConstructionParams& par) {
    const GridPtr grid = ml.rho.grid;
    const Grid& g = *grid;
    const int d = g.dim();
    const int nt = g.nt();
    const int nk = ds.count();
    const bool inc = par.mode == FlowMode::incompressible;

    AmplitudeBundle out;
    out.eps_u = ds.eps_u;
    out.delta_next = par.delta_next;
    out.varrho.resize(nt);
    out.on_support.assign(nt, 0);
    out.a.assign(nk, ScalarTimeField(grid));

    // the stress driving the amplitudes: R_l, or its deviatoric part
    std::vector<SymTensorField> stress(nt);
    for (int i = 0; i < nt; ++i) stress[i] = inc ? deviatoric(ml.R.s[i]) : ml.R.s[i];

    std::vector<double> normR(nt);
    double norm_max = 0.0;
    for (int i = 0; i < nt; ++i) {
        normR[i] = stress[i].max_frobenius();
        norm_max = std::max(norm_max, normR[i]);
    }
    const double threshold = 1e-13 * norm_max;
    for (int i = 0; i < nt; ++i) out.on_support[i] = normR[i] > threshold ? 1 : 0;

    out.f = support_window(out.on_support, g, std::max(ml.ell_x, 4.0 * g.dt()));

    for (int i = 0; i < nt; ++i)
        out.varrho[i] = 2.0 / ds.eps_u * par.delta_next * chi(normR[i] / par.delta_next);

    const int nc = nk;
    std::vector<double> vecS(nc), coeff(nc);
    double worst_ratio = 0.0;
    for (int i = 0; i < nt; ++i) {
        if (out.f[i] == 0.0) continue;  // amplitudes vanish off the window
        const double vr = out.varrho[i];
        double ratio = normR[i] / vr;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > ds.eps_u)
            throw AssertionError(strformat(
                "build_amplitudes: |R_l|/varrho = %.6g exceeds eps_u = %.6g at sample %d", ratio,
                ds.eps_u, i));
        const double fpref = out.f[i] * std::sqrt(vr);
        for (std::int64_t p = 0; p < g.points(); ++p) {
            int c = 0;
            for (int r = 0; r < d; ++r)
                for (int s = r; s < d; ++s, ++c) {
                    double Rrs = stress[i].c[SymTensorField::index(r, s, d)].v[p];
                    vecS[c] = (r == s ? 1.0 : 0.0) - Rrs / vr;
                }
            ds.solve_coeffs(vecS.data(), coeff.data());
            double rho_half = inc ? 1.0 : std::sqrt(ml.rho.s[i].v[p]);
            for (int k = 0; k < nk; ++k) {
                if (!(coeff[k] > 0.0))
                    throw AssertionError(strformat(
                        "build_amplitudes: nonpositive coefficient %d at sample %d", k, i));
                out.a[k].s[i].v[p] = fpref * rho_half * std::sqrt(coeff[k]);
            }
        }
    }
    out.sup_ratio = worst_ratio;
    return out;
}

PerturbationBundle::PerturbationBundle(GridPtr grid, std::shared_ptr<const DirectionSet> ds,
                                       std::shared_ptr<const SpatialProfile> prof,
                                       std::shared_ptr<const TemporalProfile> temporal,
                                       std::shared_ptr<const MollifiedState> ml,
                                       AmplitudeBundle amps, ConstructionParams par)
    : grid_(std::move(grid)),
      ds_(std::move(ds)),
      prof_(std::move(prof)),
      temporal_(std::move(temporal)),
      ml_(std::move(ml)),
      amps_(std::move(amps)),
      par_(par) {
    const int nk = ds_->count();
    blocks_.reserve(nk);
    for (int k = 0; k < nk; ++k)
        blocks_.push_back(make_mikado_block(grid_, *ds_, k, par_.lambda, prof_));
    build_means_and_z();
}

ScalarField PerturbationBundle::p_slow(int k, int i) const {
    return amps_.a[k].s[i] * blocks_[k].phi;
}

VectorField PerturbationBundle::c_slow(int k, int i) const {
    return blocks_[k].Wc_apply(gradient(amps_.a[k].s[i]));
}

ScalarField PerturbationBundle::theta(int k, int i) const {
    ScalarField a2 = amps_.a[k].s[i] * amps_.a[k].s[i];
    if (par_.mode == FlowMode::incompressible) return a2;
    return a2 * reciprocal(ml_->rho.s[i]);
}

ScalarField PerturbationBundle::V(int k, int i) const {
    VectorField gt = gradient(theta(k, i));
    ScalarField out(grid_);
    const auto& kv = blocks_[k].k;
    for (int a = 0; a < grid_->dim(); ++a) axpy(kv[a], gt.c[a], out);
    return out;
}

ScalarField PerturbationBundle::Q(int k, int i) const {
    VectorField gv = gradient(V(k, i));
    ScalarField out(grid_);
    const auto& kv = blocks_[k].k;
    for (int a = 0; a < grid_->dim(); ++a) axpy(kv[a], gv.c[a], out);
    return out;
}

VectorField PerturbationBundle::wo_slow(int k, int i) const {
    ScalarField v = V(k, i);
    VectorField out(grid_);
    const auto& kv = blocks_[k].k;
    for (int a = 0; a < grid_->dim(); ++a) out.c[a] = kv[a] * v;
    if (par_.mode == FlowMode::incompressible) out = leray_project(out);
    return out;
}

VectorField PerturbationBundle::wp(int i, bool raw) const {
    VectorField out(grid_);
    for (int k = 0; k < nk(); ++k) {
        double gk = g(k, i);
        if (gk == 0.0) continue;
        ScalarField p = p_slow(k, i);
        double mu = raw ? 0.0 : mean_p_[k][i];
        const auto& kv = blocks_[k].k;
        for (std::int64_t q = 0; q < grid_->points(); ++q) {
            double val = gk * (p.v[q] - mu);
            for (int a = 0; a < grid_->dim(); ++a) out.c[a].v[q] += val * kv[a];
        }
    }
    return out;
}

VectorField PerturbationBundle::wc(int i, bool raw) const {
    VectorField out(grid_);
    for (int k = 0; k < nk(); ++k) {
        double gk = g(k, i);
        if (gk == 0.0) continue;
        VectorField c = c_slow(k, i);
        for (int a = 0; a < grid_->dim(); ++a) {
            double mu = raw ? 0.0 : mean_c_[k][i][a];
            for (std::int64_t q = 0; q < grid_->points(); ++q)
                out.c[a].v[q] += gk * (c.c[a].v[q] - mu);
        }
    }
    return out;
}

VectorField PerturbationBundle::wo(int i) const {
    VectorField out(grid_);
    const double si = 1.0 / temporal_->sigma();
    for (int k = 0; k < nk(); ++k) {
        double hk = h(k, i);
        if (hk == 0.0) continue;
        axpy(-si * hk, wo_slow(k, i), out);
    }
    return out;
}

VectorField PerturbationBundle::w(int i, bool raw) const {
    VectorField out = wp(i, raw);
    VectorField c = wc(i, raw);
    VectorField o = wo(i);
    axpy(1.0, c, out);
    axpy(1.0, o, out);
    return out;
}

VectorField PerturbationBundle::dwp_dt(int i) const {
    VectorField out(grid_);
    for (int k = 0; k < nk(); ++k) {
        double gk = g(k, i), dgk = dg(k, i);
        ScalarField fd = slow_fd(
            [this](int kk, int ii) {
                ScalarField p = p_slow(kk, ii);
                double mu = mean_p_[kk][ii];
                for (auto& x : p.v) x -= mu;
                return p;
            },
            k, i);
        ScalarField p = p_slow(k, i);
        double mu = mean_p_[k][i];
        const auto& kv = blocks_[k].k;
        for (std::int64_t q = 0; q < grid_->points(); ++q) {
            double val = dgk * (p.v[q] - mu) + gk * fd.v[q];
            for (int a = 0; a < grid_->dim(); ++a) out.c[a].v[q] += val * kv[a];
        }
    }
    return out;
}

VectorField PerturbationBundle::dwc_dt(int i) const {
    VectorField out(grid_);
    for (int k = 0; k < nk(); ++k) {
        double gk = g(k, i), dgk = dg(k, i);
        VectorField fd = slow_fd(
            [this](int kk, int ii) {
                VectorField c = c_slow(kk, ii);
                for (int a = 0; a < grid_->dim(); ++a) {
                    double mu = mean_c_[kk][ii][a];
                    for (auto& x : c.c[a].v) x -= mu;
                }
                return c;
            },
            k, i);
        VectorField c = c_slow(k, i);
        for (int a = 0; a < grid_->dim(); ++a) {
            double mu = mean_c_[k][i][a];
            for (std::int64_t q = 0; q < grid_->points(); ++q)
                out.c[a].v[q] += dgk * (c.c[a].v[q] - mu) + gk * fd.c[a].v[q];
        }
    }
    return out;
}

VectorField PerturbationBundle::dwo_dt(int i) const {
    VectorField out(grid_);
    const double si = 1.0 / temporal_->sigma();
    for (int k = 0; k < nk(); ++k) {
        double gk = g(k, i), hk = h(k, i);
        // d/dt h_(k) = sigma (g_(k)^2 - 1) exactly
        VectorField s = wo_slow(k, i);
        axpy(-(gk * gk - 1.0), s, out);
        VectorField fd = slow_fd([this](int kk, int ii) { return wo_slow(kk, ii); }, k, i);
        axpy(-si * hk, fd, out);
    }
    return out;
}

ScalarField PerturbationBundle::dz_dt(int i) const {
    ScalarField out(grid_);
    if (par_.mode == FlowMode::incompressible) return out;
    const double si = 1.0 / temporal_->sigma();
    for (int k = 0; k < nk(); ++k) {
        double hk = h(k, i);
        if (hk == 0.0) continue;
        axpy(si * hk, Q(k, i), out);
    }
    return out;
}

void PerturbationBundle::build_means_and_z() {
    const int nt = grid_->nt();
    const int nkk = nk();
    mean_p_.assign(nkk, std::vector<double>(nt, 0.0));
    mean_c_.assign(nkk, std::vector<std::array<double, 3>>(nt, {0.0, 0.0, 0.0}));
    z_ = ScalarTimeField(grid_);
    std::vector<ScalarField> Qprev(nkk);

    const double si = 1.0 / temporal_->sigma();
    const double dt = grid_->dt();
    for (int i = 0; i < nt; ++i) {
        std::vector<ScalarField> Qcur(nkk);
        for (int k = 0; k < nkk; ++k) {
            mean_p_[k][i] = p_slow(k, i).mean();
            VectorField c = c_slow(k, i);
            for (int a = 0; a < grid_->dim(); ++a) mean_c_[k][i][a] = c.c[a].mean();
            if (par_.mode == FlowMode::compressible) Qcur[k] = Q(k, i);
        }
        if (par_.mode == FlowMode::compressible && i > 0) {
            z_.s[i] = z_.s[i - 1];
            const double t0 = grid_->time_at(i - 1);
            for (int k = 0; k < nkk; ++k) {
                // per-cell moments of the fast factor against the linear
                // interpolant of the slow factor
                double c0 = 0.0, c1 = 0.0;
                const int panels = 64;
                for (int pnl = 0; pnl <= 2 * panels; ++pnl) {
                    double u = double(pnl) / (2 * panels);
                    double wgt = (pnl == 0 || pnl == 2 * panels) ? 1.0 : (pnl % 2 ? 4.0 : 2.0);
                    double hv = temporal_->h(k, t0 + u * dt);
                    c0 += wgt * hv * (1.0 - u);
                    c1 += wgt * hv * u;
                }
                c0 *= dt / (6.0 * panels);
                c1 *= dt / (6.0 * panels);
                axpy(si * c0, Qprev[k], z_.s[i]);
                axpy(si * c1, Qcur[k], z_.s[i]);
            }
        }
        Qprev = std::move(Qcur);
    }
}

std::shared_ptr<PerturbationBundle> build_perturbation(
    const std::shared_ptr<const MollifiedState>& ml, const std::shared_ptr<const DirectionSet>& ds,
    const ConstructionParams& par) {
    const GridPtr grid = ml->rho.grid;
    auto prof = std::make_shared<const SpatialProfile>(grid->dim(), par.r0);
    double width = par.base_width > 0.0 ? par.base_width
                                        : grid->horizon() / (2.0 * ds->count());
    auto temporal = std::make_shared<const TemporalProfile>(ds->count(), par.tau, par.sigma,
                                                            grid->horizon(), width);
    AmplitudeBundle amps = build_amplitudes(*ml, *ds, par);
    return std::make_shared<PerturbationBundle>(grid, ds, prof, temporal, ml, std::move(amps),
                                                par);
}

namespace {

double tensor_sup(const SymTensorField& t) { return t.max_frobenius(); }

// sym tensor of s * Id
SymTensorField iso_tensor(const GridPtr& g, double s) {
    SymTensorField out(g);
    const int d = g->dim();
    for (int i = 0; i < d; ++i) out.c[SymTensorField::index(i, i, d)] = ScalarField(g, s);
    return out;
}

}  // namespace

IdentityReport verify_cancellations(const PerturbationBundle& pb) {
    const GridPtr grid = pb.grid();
    const Grid& g = *grid;
    const int d = g.dim();
    const int nt = g.nt();
    const int nk = pb.nk();
    const bool inc = pb.mode() == FlowMode::incompressible;
    const MollifiedState& ml = pb.mollified();
    const AmplitudeBundle& amps = pb.amps();
    const double c_quad = 1.0;  // profile normalized so avg phi^2 = 1
    const double sigma_inv = 1.0 / pb.temporal().sigma();

    IdentityReport rep;
    IdentityReport::Row quad{"velcancel", 0, 1e-6, {}};
    IdentityReport::Row osc{"oscillation-cancellation", 0, 1e-6, {}};
    IdentityReport::Row tem{"utemcom", 0, 1e-5, {}};
    IdentityReport::Row divfree{"div-wpc", 0, 1e-8, {}};
    IdentityReport::Row cross{"disjoint-supports", 0, 0.0, {}};
    IdentityReport::Row alias{"aliasing-residual", 0, std::numeric_limits<double>::infinity(), {}};

    for (int i = 0; i < nt; ++i) {
        // stress entering the amplitudes
        SymTensorField stress = inc ? deviatoric(ml.R.s[i]) : ml.R.s[i];
        ScalarField rho_inv =
            inc ? ScalarField(grid, 1.0) : reciprocal(ml.rho.s[i]);

        // --- velcancel: sum_k rho^{-1} a^2 <W x W> = varrho f^2 Id - f^2 R_l
        SymTensorField lhs1(grid);
        for (int k = 0; k < nk; ++k) {
            ScalarField coef = c_quad * (rho_inv * (amps.a[k].s[i] * amps.a[k].s[i]));
            axpy(1.0, dyad(coef, pb.block(k).k, d), lhs1);
        }
        double f2 = amps.f[i] * amps.f[i];
        SymTensorField rhs1 = iso_tensor(grid, amps.varrho[i] * f2) - f2 * stress;
        double s1 = std::max({tensor_sup(lhs1), tensor_sup(rhs1), amps.varrho[i]});
        double r1 = tensor_sup(lhs1 - rhs1) / s1;
        quad.per_sample.push_back(r1);
        quad.residual = std::max(quad.residual, r1);

        // --- oscillation cancellation (identity on the raw factors):
        // rho^{-1} wp x wp + f^2 R_l = varrho f^2 Id
        //   + sum rho^{-1} a^2 g^2 (phi^2 - c) kk + sum rho^{-1} a^2 (g^2-1) kk
        VectorField wpr = pb.wp(i, /*raw=*/true);
        SymTensorField lhs2 = rho_inv * outer_self(wpr) + f2 * stress;
        SymTensorField rhs2 = iso_tensor(grid, amps.varrho[i] * f2);
        for (int k = 0; k < nk; ++k) {
            double gk = pb.g(k, i);
            ScalarField a2r = rho_inv * (amps.a[k].s[i] * amps.a[k].s[i]);
            ScalarField osc_coef(grid);
            for (std::int64_t p = 0; p < g.points(); ++p) {
                double phi = pb.block(k).phi.v[p];
                osc_coef.v[p] = a2r.v[p] * (gk * gk * (phi * phi - c_quad) + (gk * gk - 1.0));
            }
            axpy(1.0, dyad(osc_coef, pb.block(k).k, d), rhs2);
        }
        double s2 = std::max({tensor_sup(lhs2), tensor_sup(rhs2), amps.varrho[i]});
        double r2 = tensor_sup(lhs2 - rhs2) / s2;
        osc.per_sample.push_back(r2);
        osc.residual = std::max(osc.residual, r2);

        // --- utemcom: d_t w^o + sum div(theta (g^2-1) kk)
        //             + sigma^{-1} sum h kk d_t grad(theta) = 0
        VectorField lhs3 = pb.dwo_dt(i);
        for (int k = 0; k < nk; ++k) {
            double gk = pb.g(k, i), hk = pb.h(k, i);
            ScalarField th = pb.theta(k, i);
            // independent route: spectral divergence of the assembled tensor
            VectorField divT = divergence(dyad(th, pb.block(k).k, d));
            if (inc) divT = leray_project(nonzero_modes(divT));
            axpy(gk * gk - 1.0, divT, lhs3);
            VectorField fdgrad = pb.slow_fd(
                [&pb](int kk, int ii) {
                    VectorField gt = gradient(pb.theta(kk, ii));
                    return gt;
                },
                k, i);
            // kk d_t grad(theta) = k (k . d_t grad theta)
            ScalarField kdot(grid);
            const auto& kv = pb.block(k).k;
            for (int a = 0; a < d; ++a) axpy(kv[a], fdgrad.c[a], kdot);
            VectorField kk_term(grid);
            for (int a = 0; a < d; ++a) kk_term.c[a] = kv[a] * kdot;
            if (inc) kk_term = leray_project(nonzero_modes(kk_term));
            axpy(sigma_inv * hk, kk_term, lhs3);
        }
        double s3 = 0.0;
        for (int k = 0; k < nk; ++k) {
            double gk = pb.g(k, i);
            s3 = std::max(s3, std::fabs(gk * gk - 1.0) * sup_norm(pb.V(k, i)));
        }
        double r3 = sup_norm(lhs3) / std::max(s3, 1e-30);
        if (s3 == 0.0 && sup_norm(lhs3) == 0.0) r3 = 0.0;
        tem.per_sample.push_back(r3);
        tem.residual = std::max(tem.residual, r3);

        // --- div(wp + wc) = 0 in the block calculus
        ScalarField divsum(grid);
        double dscale = sup_norm(pb.wp(i, true));
        for (int k = 0; k < nk; ++k) {
            double gk = pb.g(k, i);
            if (gk == 0.0) continue;
            VectorField grad_a = gradient(amps.a[k].s[i]);
            const auto& kv = pb.block(k).k;
            // div wp = g phi (k . grad a)
            ScalarField kda(grid);
            for (int a = 0; a < d; ++a) axpy(kv[a], grad_a.c[a], kda);
            for (std::int64_t p = 0; p < g.points(); ++p)
                divsum.v[p] += gk * pb.block(k).phi.v[p] * kda.v[p];
            // div wc = (column div W^c) . grad a + W^c : Hess a
            //        = -phi (k . grad a) + skew : sym
            for (std::int64_t p = 0; p < g.points(); ++p)
                divsum.v[p] -= gk * pb.block(k).phi.v[p] * kda.v[p];
            // explicit skew contraction with the Hessian (exact zero pointwise)
            std::vector<ScalarField> hess;
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    std::array<int, 3> zz{0, 0, 0};
                    zz[a] += 1;
                    zz[b] += 1;
                    hess.push_back(derivative(amps.a[k].s[i], zz));
                }
            const VectorField& gp = pb.block(k).grad_Phi;
            int hidx = 0;
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b, ++hidx) {
                    if (a == b) continue;  // diagonal of a skew matrix vanishes
                    for (std::int64_t p = 0; p < g.points(); ++p) {
                        double wab = gp.c[a].v[p] * kv[b] - kv[a] * gp.c[b].v[p];
                        double wba = gp.c[b].v[p] * kv[a] - kv[b] * gp.c[a].v[p];
                        divsum.v[p] += gk * (wab + wba) * hess[hidx].v[p];
                    }
                }
        }
        double r4 = dscale > 0.0 ? divsum.max_abs() / dscale : divsum.max_abs();
        divfree.per_sample.push_back(r4);
        divfree.residual = std::max(divfree.residual, r4);

        // --- disjoint temporal supports: pairwise products vanish exactly
        double crossmax = 0.0;
        for (int k = 0; k < nk; ++k)
            for (int kk = k + 1; kk < nk; ++kk)
                crossmax = std::max(crossmax, std::fabs(pb.g(k, i) * pb.g(kk, i)));
        cross.per_sample.push_back(crossmax);
        cross.residual = std::max(cross.residual, crossmax);

        // --- reported aliasing: spectral divergence of the sampled wp + wc
        VectorField wsum = pb.wp(i, true);
        axpy(1.0, pb.wc(i, true), wsum);
        double ar = divergence(wsum).max_abs() / std::max(1.0, sup_norm(wsum));
        alias.per_sample.push_back(ar);
        alias.residual = std::max(alias.residual, ar);
    }

    rep.rows = {quad, osc, tem, divfree, cross, alias};
    return rep;
}

std::pair<RelaxedState, NextStateReport> assemble_next_state(
    const RelaxedState& prev, const std::shared_ptr<const PerturbationBundle>& pb) {
    const GridPtr grid = pb->grid();
    const Grid& g = *grid;
    const int nt = g.nt();
    const MollifiedState& ml = pb->mollified();
    const bool inc = pb->mode() == FlowMode::incompressible;

    RelaxedState next;
    next.q = prev.q + 1;
    next.trace = pb;
    next.rho = ml.rho;
    next.m = ml.m;
    if (!inc)
        for (int i = 0; i < nt; ++i) axpy(1.0, pb->z().s[i], next.rho.s[i]);
    for (int i = 0; i < nt; ++i) axpy(1.0, pb->w(i), next.m.s[i]);

    NextStateReport rep;
    const double vol = std::pow(2.0 * M_PI, g.dim());
    rep.rho_min = 1e300;
    rep.rho_max = -1e300;
    for (int i = 0; i < nt; ++i) {
        double drift = std::fabs(next.rho.s[i].mean() - prev.rho.s[i].mean()) * vol;
        rep.mass_drift = std::max(rep.mass_drift, drift);
        for (double v : next.rho.s[i].v) {
            rep.rho_min = std::min(rep.rho_min, v);
            rep.rho_max = std::max(rep.rho_max, v);
        }
    }
    require(rep.mass_drift <= 1e-10,
            strformat("assemble_next_state: mass drift %.3e exceeds 1e-10", rep.mass_drift));
    require(rep.rho_min > 0.0, "assemble_next_state: density lost positivity");

    // continuity residual, fast-slow route with independently assembled parts
    double rho_sup = 0.0, m_sup = 0.0;
    for (int i = 0; i < nt; ++i) {
        rho_sup = std::max(rho_sup, sup_norm(next.rho.s[i]));
        m_sup = std::max(m_sup, sup_norm(next.m.s[i]));
    }
    const double floor = 1e-6 * (rho_sup / g.horizon() + 0.5 * g.n() * m_sup) + 1e-30;
    double worst = 0.0;
    for (int i = 0; i < nt; ++i) {
        // d_t rho_l by centered differences (slow)
        ScalarField A(grid);
        const double dt = g.dt();
        if (i == 0) {
            axpy(-1.5 / dt, ml.rho.s[0], A);
            axpy(2.0 / dt, ml.rho.s[1], A);
            axpy(-0.5 / dt, ml.rho.s[std::min(2, nt - 1)], A);
        } else if (i == nt - 1) {
            axpy(1.5 / dt, ml.rho.s[nt - 1], A);
            axpy(-2.0 / dt, ml.rho.s[nt - 2], A);
            axpy(0.5 / dt, ml.rho.s[std::max(nt - 3, 0)], A);
        } else {
            axpy(0.5 / dt, ml.rho.s[i + 1], A);
            axpy(-0.5 / dt, ml.rho.s[i - 1], A);
        }
        ScalarField B = divergence(ml.m.s[i]);
        ScalarField C = inc ? ScalarField(grid) : pb->dz_dt(i);
        ScalarField D = divergence(pb->wo(i));  // independent route against C
        ScalarField resid = A + B + C + D;
        double scale =
            std::max({A.max_abs(), B.max_abs(), C.max_abs(), D.max_abs(), floor});
        worst = std::max(worst, resid.max_abs() / scale);
    }
    rep.continuity_residual = worst;

    // temporal support of (grad rho, m)
    rep.support_lo = nt;
    for (int i = 0; i < nt; ++i) {
        double gr = sup_norm(gradient(next.rho.s[i]));
        double mm = sup_norm(next.m.s[i]);
        if (gr > 1e-11 || mm > 1e-11) {
            rep.support_lo = i;
            break;
        }
    }
    return {next, rep};
}

}  // namespace ciw
