#include "ops.hpp"

#include <cmath>

namespace ciw {

namespace {

// Symbol of the inverse divergence applied to a vector coefficient: for
// xi != 0 produces the symmetric trace-free tensor coefficient with
// (i xi_i) out_ij = vhat_j on mean-free input.
void rsymbol_apply(int d, const std::array<int, 3>& xi, const cplx vhat[3], cplx out[6]) {
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) k2 += double(xi[a]) * xi[a];
    if (k2 == 0.0) {
        for (int c = 0; c < d * (d + 1) / 2; ++c) out[c] = cplx(0.0);
        return;
    }
    const double m1 = -1.0 / k2;
    const double m2 = 1.0 / (k2 * k2);
    const double c_dd = double(2 - d) / double(d - 1);
    const double c_tr = -1.0 / double(d - 1);
    cplx div_v(0.0);
    for (int a = 0; a < d; ++a) div_v += cplx(0.0, xi[a]) * vhat[a];
    int c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++c) {
            cplx val = c_dd * m2 * cplx(0.0, xi[i]) * cplx(0.0, xi[j]) * div_v;
            if (i == j) val += c_tr * m1 * div_v;
            val += m1 * (cplx(0.0, xi[i]) * vhat[j] + cplx(0.0, xi[j]) * vhat[i]);
            out[c] = val;
        }
}

using VecSource = std::function<void(std::int64_t, const std::array<int, 3>&, cplx[3])>;

SymTensorField apply_rsymbol(const GridPtr& grid, const VecSource& source) {
    const Grid& g = *grid;
    const int d = g.dim();
    const int nc = d * (d + 1) / 2;
    std::vector<std::vector<cplx>> out(nc, std::vector<cplx>(g.spec_size()));
    std::array<int, 3> xi;
    cplx vhat[3], t[6];
    for (std::int64_t i = 0; i < g.spec_size(); ++i) {
        g.spec_freq(i, xi);
        if (g.is_nyquist(xi)) {
            for (int c = 0; c < nc; ++c) out[c][i] = cplx(0.0);
            continue;
        }
        source(i, xi, vhat);
        rsymbol_apply(d, xi, vhat, t);
        for (int c = 0; c < nc; ++c) out[c][i] = t[c];
    }
    SymTensorField r(grid);
    for (int c = 0; c < nc; ++c) r.c[c].v = fft_inverse(g, out[c]);
    return r;
}

std::vector<std::vector<cplx>> spectra_of(const std::vector<ScalarField>& comps) {
    std::vector<std::vector<cplx>> s;
    s.reserve(comps.size());
    for (const auto& f : comps) s.push_back(fft_forward(*f.grid, f.v));
    return s;
}

}  // namespace

SymTensorField inverse_divergence(const VectorField& v) {
    const int d = v.grid->dim();
    double sup = v.max_norm();
    for (int a = 0; a < d; ++a) {
        double m = std::fabs(v.c[a].mean());
        if (m > 1e-12 * std::max(sup, 1.0))
            throw AssertionError(
                strformat("inverse_divergence: input not mean-free, |mean| = %.3e", m));
    }
    auto sp = spectra_of(v.c);
    return apply_rsymbol(v.grid, [&](std::int64_t i, const std::array<int, 3>&, cplx vhat[3]) {
        for (int a = 0; a < d; ++a) vhat[a] = sp[a][i];
    });
}

SymTensorField inv_div_of_div(const SymTensorField& a) {
    const int d = a.grid->dim();
    auto sp = spectra_of(a.c);
    return apply_rsymbol(a.grid, [&](std::int64_t i, const std::array<int, 3>& xi, cplx vhat[3]) {
        for (int j = 0; j < d; ++j) {
            cplx acc(0.0);
            for (int k = 0; k < d; ++k)
                acc += cplx(0.0, xi[k]) * sp[SymTensorField::index(k, j, d)][i];
            vhat[j] = acc;
        }
    });
}

SymTensorField inv_div_of_grad(const ScalarField& f) {
    const int d = f.grid->dim();
    auto sp = fft_forward(*f.grid, f.v);
    return apply_rsymbol(f.grid, [&](std::int64_t i, const std::array<int, 3>& xi, cplx vhat[3]) {
        for (int j = 0; j < d; ++j) vhat[j] = cplx(0.0, xi[j]) * sp[i];
    });
}

SymTensorField inv_div_of_graddiv(const VectorField& u) {
    const int d = u.grid->dim();
    auto sp = spectra_of(u.c);
    return apply_rsymbol(u.grid, [&](std::int64_t i, const std::array<int, 3>& xi, cplx vhat[3]) {
        cplx div_u(0.0);
        for (int k = 0; k < d; ++k) div_u += cplx(0.0, xi[k]) * sp[k][i];
        for (int j = 0; j < d; ++j) vhat[j] = cplx(0.0, xi[j]) * div_u;
    });
}

SymTensorField inv_div_of_fraclap(const VectorField& u, double alpha) {
    const int d = u.grid->dim();
    auto sp = spectra_of(u.c);
    return apply_rsymbol(u.grid, [&](std::int64_t i, const std::array<int, 3>& xi, cplx vhat[3]) {
        double k2 = double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2];
        double m = k2 == 0.0 ? 0.0 : std::pow(k2, alpha);
        for (int j = 0; j < d; ++j) vhat[j] = m * sp[j][i];
    });
}

SymTensorField inv_div_of_div_leray(const SymTensorField& a) {
    const int d = a.grid->dim();
    auto sp = spectra_of(a.c);
    return apply_rsymbol(a.grid, [&](std::int64_t i, const std::array<int, 3>& xi, cplx vhat[3]) {
        double k2 = double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2];
        cplx div_v[3];
        for (int j = 0; j < d; ++j) {
            cplx acc(0.0);
            for (int k = 0; k < d; ++k)
                acc += cplx(0.0, xi[k]) * sp[SymTensorField::index(k, j, d)][i];
            div_v[j] = acc;
        }
        if (k2 == 0.0) {
            for (int j = 0; j < d; ++j) vhat[j] = div_v[j];
            return;
        }
        cplx dot(0.0);
        for (int j = 0; j < d; ++j) dot += double(xi[j]) * div_v[j];
        for (int j = 0; j < d; ++j) vhat[j] = div_v[j] - double(xi[j]) * dot / k2;
    });
}

VectorField leray_project(const VectorField& v) {
    const Grid& g = *v.grid;
    const int d = g.dim();
    auto sp = spectra_of(v.c);
    std::vector<std::vector<cplx>> out(d, std::vector<cplx>(g.spec_size()));
    std::array<int, 3> xi;
    for (std::int64_t i = 0; i < g.spec_size(); ++i) {
        g.spec_freq(i, xi);
        double k2 = double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2];
        if (k2 == 0.0) {
            for (int a = 0; a < d; ++a) out[a][i] = sp[a][i];
            continue;
        }
        if (g.is_nyquist(xi)) {
            for (int a = 0; a < d; ++a) out[a][i] = cplx(0.0);
            continue;
        }
        cplx dot(0.0);
        for (int a = 0; a < d; ++a) dot += double(xi[a]) * sp[a][i];
        for (int a = 0; a < d; ++a) out[a][i] = sp[a][i] - double(xi[a]) * dot / k2;
    }
    VectorField r(v.grid);
    for (int a = 0; a < d; ++a) r.c[a].v = fft_inverse(g, out[a]);
    return r;
}

ScalarField nonzero_modes(const ScalarField& f) { return remove_mean(f); }

VectorField nonzero_modes(const VectorField& f) {
    VectorField r(f.grid);
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = remove_mean(f.c[i]);
    return r;
}

SymTensorField nonzero_modes(const SymTensorField& f) {
    SymTensorField r(f.grid);
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = remove_mean(f.c[i]);
    return r;
}

ScalarField high_pass(const ScalarField& f, double cutoff) {
    if (cutoff < 1.0) throw Error("high_pass: cutoff must be >= 1");
    const Grid& g = *f.grid;
    Spectrum s = to_spectral(f);
    std::array<int, 3> xi;
    for (std::int64_t i = 0; i < g.spec_size(); ++i) {
        g.spec_freq(i, xi);
        double kk = std::sqrt(double(xi[0]) * xi[0] + double(xi[1]) * xi[1] +
                              double(xi[2]) * xi[2]);
        if (kk < cutoff) s.c[i] = cplx(0.0);
    }
    return to_physical(s);
}

std::pair<SymTensorField, SymTensorField> modulated_inverse_divergence(
    const VectorField& v, const std::array<int, 3>& K) {
    const Grid& g = *v.grid;
    const int d = g.dim(), n = g.n();
    const int nc = d * (d + 1) / 2;
    auto sp = spectra_of(v.c);

    // full-spectrum buffers for the shifted-symbol result (not Hermitian)
    std::vector<std::vector<cplx>> full(nc, std::vector<cplx>(g.points(), cplx(0.0)));
    std::array<int, 3> xi, sh;
    cplx vhat[3], t[6];
    for (std::int64_t i = 0; i < g.spec_size(); ++i) {
        g.spec_freq(i, xi);
        if (g.is_nyquist(xi)) continue;  // negligible for slow envelopes
        // the stored mode, plus its conjugate when not separately stored
        for (int side = 0; side < 2; ++side) {
            std::array<int, 3> eta = xi;
            if (side == 1) {
                if (xi[d - 1] == 0) continue;  // conjugate lives in the same plane
                for (int a = 0; a < d; ++a) eta[a] = -xi[a];
            }
            for (int a = 0; a < d; ++a) {
                sh[a] = eta[a] + K[a];
                vhat[a] = side == 1 ? std::conj(sp[a][i]) : sp[a][i];
            }
            rsymbol_apply(d, sh, vhat, t);
            // place at the storage slot of eta; the symbol already saw the true
            // shifted frequency, the e^{iK.x} factor is applied after the
            // transform
            std::int64_t idx = 0;
            for (int a = 0; a < d; ++a) {
                int j = ((eta[a] % n) + n) % n;
                idx = idx * n + j;
            }
            for (int c = 0; c < nc; ++c) full[c][idx] += t[c];
        }
    }

    std::pair<SymTensorField, SymTensorField> out{SymTensorField(v.grid), SymTensorField(v.grid)};
    // e^{iK.x} at the nodes
    std::vector<cplx> phase(g.points());
    std::array<int, 3> j;
    for (std::int64_t p = 0; p < g.points(); ++p) {
        g.phys_coords(p, j);
        double arg = 0.0;
        for (int a = 0; a < d; ++a) arg += K[a] * g.node(j[a]);
        phase[p] = std::polar(1.0, arg);
    }
    for (int c = 0; c < nc; ++c) {
        std::vector<cplx> vals = fft_full_inverse(g, full[c]);
        for (std::int64_t p = 0; p < g.points(); ++p) {
            cplx z = vals[p] * phase[p];
            out.first.c[c].v[p] = z.real();
            out.second.c[c].v[p] = z.imag();
        }
    }
    return out;
}

}  // namespace ciw
