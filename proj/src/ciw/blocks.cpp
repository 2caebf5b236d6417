#include "blocks.hpp"

#include <cmath>

namespace ciw {

VectorField MikadoBlock::W() const {
    const int d = phi.grid->dim();
    VectorField w(phi.grid);
    for (int a = 0; a < d; ++a) w.c[a] = k[a] * phi;
    return w;
}

VectorField MikadoBlock::Wc_apply(const VectorField& v) const {
    const int d = phi.grid->dim();
    const std::int64_t np = phi.grid->points();
    VectorField out(phi.grid);
    for (std::int64_t p = 0; p < np; ++p) {
        double kv = 0.0, gv = 0.0;
        for (int a = 0; a < d; ++a) {
            kv += k[a] * v.c[a].v[p];
            gv += grad_Phi.c[a].v[p] * v.c[a].v[p];
        }
        for (int a = 0; a < d; ++a) out.c[a].v[p] = grad_Phi.c[a].v[p] * kv - k[a] * gv;
    }
    return out;
}

VectorField MikadoBlock::div_Wc_row() const { return W(); }

MikadoBlock make_mikado_block(const GridPtr& grid, const DirectionSet& ds, int which, long lambda,
                              const std::shared_ptr<const SpatialProfile>& prof) {
    const Grid& g = *grid;
    const int d = g.dim();
    if (lambda < 1) throw Error("make_mikado_block: lambda must be a positive integer");
    const long freq = lambda * ds.N_Lambda;
    if (freq > g.n() / 4)
        throw Error(strformat(
            "make_mikado_block: lambda*N_Lambda = %ld not resolvable, need n >= %ld (n = %d)",
            freq, 4 * freq, g.n()));

    const Direction& dir = ds.dirs[which];
    MikadoBlock blk;
    blk.dir_index = which;
    blk.lambda = lambda;
    blk.freq = freq;
    auto kx = dir.unit(0);
    blk.k = kx;
    blk.phi = ScalarField(grid);
    blk.grad_Phi = VectorField(grid);

    // transverse frame rows k_1 [, k_2]
    std::array<std::array<double, 3>, 2> frame{};
    for (int r = 1; r < d; ++r) frame[r - 1] = dir.unit(r);

    const double pot = -1.0 / (double(freq) * double(freq));  // Phi_(k) = -(lambda N)^{-2} Phi(..)
    std::array<int, 3> j;
    double y[2], gp[2];
    const std::int64_t np = g.points();
    for (std::int64_t p = 0; p < np; ++p) {
        g.phys_coords(p, j);
        double x[3] = {g.node(j[0]), g.node(j[1]), d == 3 ? g.node(j[2]) : 0.0};
        for (int r = 0; r < d - 1; ++r) {
            double dot = 0.0;
            for (int a = 0; a < d; ++a) dot += frame[r][a] * x[a];
            // wrap the (integer-frequency) argument into the profile period
            y[r] = std::remainder(freq * dot, 2.0 * M_PI);
        }
        blk.phi.v[p] = prof->phi(y);
        prof->grad_Phi(y, gp);
        // grad_x [pot * Phi(freq * frame . x)] = pot * freq * sum_r dPhi_r k_r
        for (int a = 0; a < d; ++a) {
            double acc = 0.0;
            for (int r = 0; r < d - 1; ++r) acc += gp[r] * frame[r][a];
            blk.grad_Phi.c[a].v[p] = pot * freq * acc;
        }
    }
    return blk;
}

namespace {

// tight sup over the profile's transverse section(s)
double section_sup(const SpatialProfile& prof, int deriv) {
    const double r0 = prof.radius();
    double best = 0.0;
    const int N = 40000;
    if (prof.dim() == 2) {
        for (int i = 0; i <= N; ++i) {
            double y[1] = {-r0 + 2.0 * r0 * i / N};
            double v = 0.0;
            if (deriv == 0) {
                v = prof.phi(y);
            } else {
                double a[1] = {y[0] + r0 / N}, b[1] = {y[0] - r0 / N};
                v = (prof.phi(a) - prof.phi(b)) / (2.0 * r0 / N);
            }
            best = std::max(best, std::fabs(v));
        }
        return best;
    }
    // radial profile: scan a diameter
    for (int i = 0; i <= N; ++i) {
        double y[2] = {-r0 + 2.0 * r0 * i / N, 0.0};
        double v = 0.0;
        if (deriv == 0) {
            v = prof.phi(y);
        } else {
            double a[2] = {y[0] + r0 / N, 0.0}, b[2] = {y[0] - r0 / N, 0.0};
            v = (prof.phi(a) - prof.phi(b)) / (2.0 * r0 / N);
        }
        best = std::max(best, std::fabs(v));
    }
    return best;
}

}  // namespace

double mikado_W_sup(const DirectionSet&, long, const SpatialProfile& prof) {
    return section_sup(prof, 0);
}

double mikado_W_c1(const DirectionSet& ds, long lambda, const SpatialProfile& prof) {
    // ||W||_C0 + sup |grad W|: the gradient scales with lambda * N_Lambda
    return section_sup(prof, 0) + double(lambda * ds.N_Lambda) * section_sup(prof, 1);
}

double mikado_Wc_sup(const DirectionSet& ds, long lambda, const SpatialProfile& prof) {
    // |W^c|_F = sqrt(2) |grad Phi_(k)|, and |grad Phi_(k)| = |grad Phi| / (lambda N)
    return std::sqrt(2.0) * prof.grad_Phi_sup() / double(lambda * ds.N_Lambda);
}

double mikado_phi_cn(const DirectionSet& ds, long lambda, const SpatialProfile& prof, int N) {
    if (N == 0) return section_sup(prof, 0);
    if (N != 1) throw Error("mikado_phi_cn: fine-scan norms implemented for N <= 1");
    return section_sup(prof, 0) + double(lambda * ds.N_Lambda) * section_sup(prof, 1);
}

}  // namespace ciw
