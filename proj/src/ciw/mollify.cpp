#include "mollify.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "quadrature.hpp"
#include "spectral.hpp"

namespace ciw {

namespace {

double bump_raw(double s) {
    double q = 1.0 - s * s;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double bump_mass() {
    static const double I = integrate(bump_raw, -1.0, 1.0, 4096);
    return I;
}

// psi_l(s) = psi(s/l)/l with int psi = 1.
double psi_scaled(double ell, double s) { return bump_raw(s / ell) / (ell * bump_mass()); }

struct SymbolKey {
    long long ell_bits;
    bool operator<(const SymbolKey& o) const { return ell_bits < o.ell_bits; }
};

// int_{-l}^{l} psi_l(s) cos(ks) ds, cached per mollifier width
class SymbolCache {
public:
    static double get(double ell, int k) {
        static SymbolCache cache;
        if (k < 0) k = -k;
        std::lock_guard<std::mutex> lock(cache.mu_);
        SymbolKey key{(long long)(ell * 1e15)};
        auto& tab = cache.tabs_[key];
        while ((int)tab.size() <= k) {
            int kk = (int)tab.size();
            // resolve the oscillation: panels scale with k*ell
            int m = 1024 + 8 * (int)std::ceil(std::fabs(kk * ell));
            double val = kk == 0 ? 1.0
                                 : integrate([&](double u) { return bump_raw(u) * std::cos(kk * ell * u); },
                                             -1.0, 1.0, m) /
                                       bump_mass();
            tab.push_back(val);
        }
        return tab[k];
    }

private:
    std::mutex mu_;
    std::map<SymbolKey, std::vector<double>> tabs_;
};

}  // namespace

double mollifier_symbol(double ell, int k) { return SymbolCache::get(ell, k); }

ScalarField mollify_space(const ScalarField& f, double ell) {
    const Grid& g = *f.grid;
    Spectrum s = to_spectral(f);
    std::array<int, 3> xi;
    for (std::int64_t i = 0; i < g.spec_size(); ++i) {
        g.spec_freq(i, xi);
        double m = 1.0;
        for (int a = 0; a < g.dim(); ++a) m *= mollifier_symbol(ell, xi[a]);
        s.c[i] *= m;
    }
    return to_physical(s);
}

namespace {

std::vector<double> time_stencil(const Grid& g, double ell_t) {
    const double dt = g.dt();
    int R = ell_t > 0.0 ? (int)std::floor(ell_t / dt) : 0;
    // keep the support strictly inside (-ell_t, ell_t)
    while (R > 0 && R * dt >= ell_t) --R;
    std::vector<double> w(2 * R + 1, 0.0);
    double sum = 0.0;
    for (int r = -R; r <= R; ++r) {
        double val = psi_scaled(ell_t, r * dt);
        w[r + R] = val;
        sum += val;
    }
    for (auto& x : w) x /= sum;
    return w;
}

template <class F>
F weighted_clamped(const TimeField<F>& f, const std::vector<double>& w, int i) {
    const int R = ((int)w.size() - 1) / 2;
    const int nt = f.grid->nt();
    F out(f.grid);
    for (int r = -R; r <= R; ++r) {
        int j = std::min(std::max(i - r, 0), nt - 1);
        axpy(w[r + R], f.s[j], out);
    }
    return out;
}

}  // namespace

template <class F>
TimeField<F> mollify_time(const TimeField<F>& f, double ell_t) {
    if (ell_t <= 0.0) return f;
    std::vector<double> w = time_stencil(*f.grid, ell_t);
    if (w.size() == 1) return f;
    TimeField<F> out(f.grid);
    for (int i = 0; i < f.grid->nt(); ++i) out.s[i] = weighted_clamped(f, w, i);
    return out;
}

template <class F>
TimeField<F> mollify(const TimeField<F>& f, double ell_x, double ell_t, MollifyDiagnostics* diag) {
    const Grid& g = *f.grid;
    if (!(ell_x > 0.0)) throw Error("mollify: ell_x must be positive");
    if (ell_t < 0.0) throw Error("mollify: ell_t must be nonnegative");
    if (ell_x < 4.0 * 2.0 * M_PI / g.n() && diag)
        diag->warnings.push_back(
            strformat("mollify: ell_x=%g below the resolvable scale %g", ell_x,
                      4.0 * 2.0 * M_PI / g.n()));
    TimeField<F> out(f.grid);
    for (int i = 0; i < g.nt(); ++i) {
        if constexpr (std::is_same_v<F, ScalarField>) {
            out.s[i] = mollify_space(f.s[i], ell_x);
        } else {
            for (size_t c = 0; c < f.s[i].c.size(); ++c)
                out.s[i].c[c] = mollify_space(f.s[i].c[c], ell_x);
        }
    }
    return mollify_time(out, ell_t);
}

template TimeField<ScalarField> mollify_time(const TimeField<ScalarField>&, double);
template TimeField<VectorField> mollify_time(const TimeField<VectorField>&, double);
template TimeField<SymTensorField> mollify_time(const TimeField<SymTensorField>&, double);
template TimeField<ScalarField> mollify(const TimeField<ScalarField>&, double, double,
                                        MollifyDiagnostics*);
template TimeField<VectorField> mollify(const TimeField<VectorField>&, double, double,
                                        MollifyDiagnostics*);
template TimeField<SymTensorField> mollify(const TimeField<SymTensorField>&, double, double,
                                           MollifyDiagnostics*);

}  // namespace ciw
