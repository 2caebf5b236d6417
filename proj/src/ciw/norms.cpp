#include "norms.hpp"

#include <cmath>

#include "quadrature.hpp"
#include "spectral.hpp"

namespace ciw {

namespace {

void multi_indices(int d, int order, std::vector<std::array<int, 3>>& out) {
    if (d == 2) {
        for (int a = 0; a <= order; ++a) out.push_back({a, order - a, 0});
    } else {
        for (int a = 0; a <= order; ++a)
            for (int b = 0; a + b <= order; ++b) out.push_back({a, b, order - a - b});
    }
}

template <class F>
F derive_components(const F& f, const std::array<int, 3>& zeta) {
    if constexpr (std::is_same_v<F, ScalarField>) {
        return derivative(f, zeta);
    } else {
        F out(f.grid);
        for (size_t i = 0; i < f.c.size(); ++i) out.c[i] = derivative(f.c[i], zeta);
        return out;
    }
}

template <class F>
double holder_cn_impl(const F& f, int N) {
    double total = 0.0;
    for (int order = 0; order <= N; ++order) {
        std::vector<std::array<int, 3>> zs;
        multi_indices(f.grid->dim(), order, zs);
        for (const auto& z : zs) total += sup_norm(derive_components(f, z));
    }
    return total;
}

double pair_quotient_max(const ScalarField& f, double eta, int window) {
    const Grid& g = *f.grid;
    const int d = g.dim(), n = g.n();
    const double dx = 2.0 * M_PI / n;
    double best = 0.0;
    auto visit = [&](int o0, int o1, int o2) {
        if (o0 == 0 && o1 == 0 && o2 == 0) return;
        double dist = dx * std::sqrt(double(o0) * o0 + double(o1) * o1 + double(o2) * o2);
        double scale = 1.0 / std::pow(dist, eta);
        std::array<int, 3> j;
        for (std::int64_t p = 0; p < g.points(); ++p) {
            g.phys_coords(p, j);
            int q0 = (j[0] + o0 + n) % n;
            int q1 = (j[1] + o1 + n) % n;
            std::int64_t q;
            if (d == 2) {
                q = (std::int64_t)q0 * n + q1;
            } else {
                int q2 = (j[2] + o2 + n) % n;
                q = ((std::int64_t)q0 * n + q1) * n + q2;
            }
            double diff = std::fabs(f.v[p] - f.v[q]) * scale;
            if (diff > best) best = diff;
        }
    };
    // half-space of offsets (pairs are symmetric)
    for (int o0 = 0; o0 <= window; ++o0)
        for (int o1 = (o0 == 0 ? 0 : -window); o1 <= window; ++o1) {
            if (d == 2) {
                visit(o0, o1, 0);
            } else {
                for (int o2 = ((o0 == 0 && o1 == 0) ? 0 : -window); o2 <= window; ++o2)
                    visit(o0, o1, o2);
            }
        }
    return best;
}

// Hoelder seminorm of the order-N derivatives of a (possibly multi-component)
// field, max over components.
template <class F>
double top_seminorm(const F& f, int N, double eta, int window) {
    std::vector<std::array<int, 3>> zs;
    multi_indices(f.grid->dim(), N, zs);
    double semi = 0.0;
    for (const auto& z : zs) {
        F der = derive_components(f, z);
        if constexpr (std::is_same_v<F, ScalarField>) {
            semi = std::max(semi, pair_quotient_max(der, eta, window));
        } else {
            for (const auto& comp : der.c)
                semi = std::max(semi, pair_quotient_max(comp, eta, window));
        }
    }
    return semi;
}

template <class F>
double lp_space(const F& f, double p) {
    const std::int64_t np = f.grid->points();
    double acc = 0.0;
    if constexpr (std::is_same_v<F, ScalarField>) {
        for (std::int64_t q = 0; q < np; ++q) acc += std::pow(std::fabs(f.v[q]), p);
    } else {
        for (std::int64_t q = 0; q < np; ++q) {
            double s2 = 0.0;
            for (const auto& comp : f.c) s2 += comp.v[q] * comp.v[q];
            acc += std::pow(std::sqrt(s2), p);
        }
    }
    return std::pow(acc / np, 1.0 / p);
}

template <class F>
double estimate_norm_impl(const TimeField<F>& f, const NormSpec& spec) {
    const int nt = f.grid->nt();
    const double T = f.grid->horizon();
    switch (spec.kind) {
        case NormKind::CN: {
            if (spec.N > 6) throw Error("estimate_norm: N must be <= 6");
            // C^N_{t,x}: sum over m of sup_t ||d_t^m f(t)||_{C^{N-m}_x}
            double total = 0.0;
            TimeField<F> cur = f;
            for (int m = 0;; ++m) {
                double best = 0.0;
                for (int i = 0; i < nt; ++i)
                    best = std::max(best, holder_cn_impl(cur.s[i], spec.N - m));
                total += best;
                if (m == spec.N) break;
                cur = time_derivative(cur);
            }
            return total;
        }
        case NormKind::CNeta: {
            if (!(spec.eta > 0.0 && spec.eta < 1.0))
                throw Error("estimate_norm: eta must be in (0,1)");
            double best = 0.0;
            for (int i = 0; i < nt; ++i)
                best = std::max(best, holder_cn_impl(f.s[i], spec.N) +
                                          top_seminorm(f.s[i], spec.N, spec.eta, spec.window));
            return best;
        }
        case NormKind::LptCx: {
            std::vector<double> vals(nt);
            for (int i = 0; i < nt; ++i) vals[i] = sup_norm(f.s[i]);
            return lp_time(vals, spec.p, T);
        }
        case NormKind::CtHs: {
            double best = 0.0;
            for (int i = 0; i < nt; ++i) {
                double v;
                if constexpr (std::is_same_v<F, ScalarField>) {
                    v = sobolev_norm(f.s[i], spec.s);
                } else {
                    double acc = 0.0;
                    for (const auto& comp : f.s[i].c) {
                        double x = sobolev_norm(comp, spec.s);
                        acc += x * x;
                    }
                    v = std::sqrt(acc);
                }
                best = std::max(best, v);
            }
            return best;
        }
        case NormKind::WNp: {
            if (std::isinf(spec.p)) throw Error("estimate_norm: WNp needs finite p");
            double total = 0.0;
            TimeField<F> cur = f;
            for (int m = 0;; ++m) {
                for (int order = 0; order + m <= spec.N; ++order) {
                    std::vector<std::array<int, 3>> zs;
                    multi_indices(f.grid->dim(), order, zs);
                    for (const auto& z : zs) {
                        std::vector<double> vals(nt);
                        for (int i = 0; i < nt; ++i)
                            vals[i] = lp_space(derive_components(cur.s[i], z), spec.p);
                        total += lp_time(vals, spec.p, T);
                    }
                }
                if (m == spec.N) break;
                cur = time_derivative(cur);
            }
            return total;
        }
    }
    throw Error("estimate_norm: unknown kind");
}

}  // namespace

double sup_norm(const ScalarField& f) { return f.max_abs(); }
double sup_norm(const VectorField& f) { return f.max_norm(); }
double sup_norm(const SymTensorField& f) { return f.max_frobenius(); }

double holder_cn(const ScalarField& f, int N) { return holder_cn_impl(f, N); }
double holder_cn(const VectorField& f, int N) { return holder_cn_impl(f, N); }
double holder_cn(const SymTensorField& f, int N) { return holder_cn_impl(f, N); }

double holder_seminorm(const ScalarField& f, double eta, int window) {
    return pair_quotient_max(f, eta, window);
}

double holder_cn_eta(const ScalarField& f, int N, double eta, int window) {
    return holder_cn(f, N) + top_seminorm(f, N, eta, window);
}

template <class F>
TimeField<F> time_derivative(const TimeField<F>& f) {
    const int nt = f.grid->nt();
    const double dt = f.grid->dt();
    TimeField<F> out(f.grid);
    for (int i = 0; i < nt; ++i) {
        F acc(f.grid);
        if (nt == 2) {
            axpy(-1.0 / dt, f.s[0], acc);
            axpy(1.0 / dt, f.s[1], acc);
        } else if (i == 0) {
            axpy(-1.5 / dt, f.s[0], acc);
            axpy(2.0 / dt, f.s[1], acc);
            axpy(-0.5 / dt, f.s[2], acc);
        } else if (i == nt - 1) {
            axpy(1.5 / dt, f.s[nt - 1], acc);
            axpy(-2.0 / dt, f.s[nt - 2], acc);
            axpy(0.5 / dt, f.s[nt - 3], acc);
        } else {
            axpy(0.5 / dt, f.s[i + 1], acc);
            axpy(-0.5 / dt, f.s[i - 1], acc);
        }
        out.s[i] = std::move(acc);
    }
    return out;
}

template TimeField<ScalarField> time_derivative(const TimeField<ScalarField>&);
template TimeField<VectorField> time_derivative(const TimeField<VectorField>&);
template TimeField<SymTensorField> time_derivative(const TimeField<SymTensorField>&);

double lp_time(const std::vector<double>& vals, double p, double T) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, std::fabs(v));
        return m;
    }
    std::vector<double> w = simpson_weights(static_cast<int>(vals.size()), T);
    double acc = 0.0;
    for (size_t i = 0; i < vals.size(); ++i) acc += w[i] * std::pow(std::fabs(vals[i]), p);
    return std::pow(acc, 1.0 / p);
}

double estimate_norm(const TimeField<ScalarField>& f, const NormSpec& spec) {
    return estimate_norm_impl(f, spec);
}
double estimate_norm(const TimeField<VectorField>& f, const NormSpec& spec) {
    return estimate_norm_impl(f, spec);
}
double estimate_norm(const TimeField<SymTensorField>& f, const NormSpec& spec) {
    return estimate_norm_impl(f, spec);
}

}  // namespace ciw
