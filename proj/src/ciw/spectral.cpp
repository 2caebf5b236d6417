#include "spectral.hpp"

#include <cmath>

namespace ciw {

Spectrum to_spectral(const ScalarField& f) { return Spectrum{f.grid, fft_forward(*f.grid, f.v)}; }

ScalarField to_physical(const Spectrum& s) {
    ScalarField f(s.grid);
    f.v = fft_inverse(*s.grid, s.c);
    return f;
}

cplx coefficient(const Spectrum& s, std::array<int, 3> xi) {
    const Grid& g = *s.grid;
    const int d = g.dim(), n = g.n();
    bool conj = false;
    if (xi[d - 1] < 0) {
        for (int a = 0; a < d; ++a) xi[a] = -xi[a];
        conj = true;
    }
    std::int64_t idx = 0;
    for (int a = 0; a < d - 1; ++a) {
        int j = xi[a] >= 0 ? xi[a] : xi[a] + n;
        idx = idx * n + j;
    }
    idx = idx * g.spec_last() + xi[d - 1];
    cplx c = s.c[idx];
    return conj ? std::conj(c) : c;
}

double spectral_energy(const Spectrum& s) {
    const Grid& g = *s.grid;
    double e = 0.0;
    for (std::int64_t i = 0; i < g.spec_size(); ++i) e += g.spec_weight(i) * std::norm(s.c[i]);
    return e;
}

ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<cplx(const std::array<int, 3>&)>& m) {
    const Grid& g = *f.grid;
    Spectrum s = to_spectral(f);
    std::array<int, 3> xi;
    for (std::int64_t i = 0; i < g.spec_size(); ++i) {
        g.spec_freq(i, xi);
        s.c[i] = g.is_nyquist(xi) ? cplx(0.0) : s.c[i] * m(xi);
    }
    return to_physical(s);
}

ScalarField derivative(const ScalarField& f, const std::array<int, 3>& zeta) {
    int order = zeta[0] + zeta[1] + zeta[2];
    if (order > 6) throw Error("derivative: |zeta| must be <= 6");
    return apply_multiplier(f, [&zeta](const std::array<int, 3>& xi) {
        cplx m(1.0, 0.0);
        for (int a = 0; a < 3; ++a)
            for (int p = 0; p < zeta[a]; ++p) m *= cplx(0.0, xi[a]);
        return m;
    });
}

ScalarField fractional_laplacian(const ScalarField& f, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw Error("fractional_laplacian: alpha must be in (0,1]");
    return apply_multiplier(f, [alpha](const std::array<int, 3>& xi) {
        double k2 = double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2];
        return cplx(k2 == 0.0 ? 0.0 : std::pow(k2, alpha));
    });
}

VectorField fractional_laplacian(const VectorField& f, double alpha) {
    VectorField r(f.grid);
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = fractional_laplacian(f.c[i], alpha);
    return r;
}

VectorField gradient(const ScalarField& f) {
    const int d = f.grid->dim();
    VectorField r(f.grid);
    for (int a = 0; a < d; ++a) {
        std::array<int, 3> z{0, 0, 0};
        z[a] = 1;
        r.c[a] = derivative(f, z);
    }
    return r;
}

ScalarField divergence(const VectorField& f) {
    const int d = f.grid->dim();
    ScalarField r(f.grid);
    for (int a = 0; a < d; ++a) {
        std::array<int, 3> z{0, 0, 0};
        z[a] = 1;
        axpy(1.0, derivative(f.c[a], z), r);
    }
    return r;
}

VectorField divergence(const SymTensorField& t) {
    const int d = t.grid->dim();
    VectorField r(t.grid);
    for (int j = 0; j < d; ++j) {
        ScalarField acc(t.grid);
        for (int i = 0; i < d; ++i) {
            std::array<int, 3> z{0, 0, 0};
            z[i] = 1;
            axpy(1.0, derivative(t.c[SymTensorField::index(i, j, d)], z), acc);
        }
        r.c[j] = std::move(acc);
    }
    return r;
}

VectorField grad_div(const VectorField& f) { return gradient(divergence(f)); }

ScalarField laplacian_inv(const ScalarField& f) {
    return apply_multiplier(f, [](const std::array<int, 3>& xi) {
        double k2 = double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2];
        return cplx(k2 == 0.0 ? 0.0 : -1.0 / k2);
    });
}

ScalarField remove_mean(const ScalarField& f) {
    ScalarField r = f;
    double m = f.mean();
    for (auto& x : r.v) x -= m;
    return r;
}

ScalarField nyquist_project(const ScalarField& f) {
    return apply_multiplier(f, [](const std::array<int, 3>&) { return cplx(1.0); });
}

VectorField nyquist_project(const VectorField& f) {
    VectorField r(f.grid);
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = nyquist_project(f.c[i]);
    return r;
}

double sobolev_norm(const ScalarField& f, double s) {
    if (s < -2.0 || s > 2.0) throw Error("sobolev_norm: s must be in [-2,2]");
    const Grid& g = *f.grid;
    Spectrum sp = to_spectral(f);
    std::array<int, 3> xi;
    double acc = 0.0;
    for (std::int64_t i = 0; i < g.spec_size(); ++i) {
        g.spec_freq(i, xi);
        double k2 = double(xi[0]) * xi[0] + double(xi[1]) * xi[1] + double(xi[2]) * xi[2];
        acc += g.spec_weight(i) * std::pow(1.0 + k2, s) * std::norm(sp.c[i]);
    }
    return std::sqrt(acc);
}

}  // namespace ciw
