#pragma once

#include "field.hpp"

namespace ciw {

// Grid-sampled norm estimators. Sup norms are maxima over collocation nodes,
// Hoelder quotients run over node pairs within a window, time integrals use
// composite Simpson. All of them are lower-biased estimates of the continuum
// norms; acceptance logic relies on relative comparisons and fitted slopes.

enum class NormKind { CN, CNeta, LptCx, CtHs, WNp };

struct NormSpec {
    NormKind kind = NormKind::CN;
    int N = 0;        // derivative order for CN / CNeta / WNp
    double eta = 0.5; // Hoelder exponent, in (0,1)
    double p = 2.0;   // Lebesgue exponent, [1, inf]
    double s = 0.0;   // Sobolev exponent, [-2, 2]
    int window = 3;   // Hoelder pair window in nodes

    static NormSpec C0() { return NormSpec{NormKind::CN, 0}; }
    static NormSpec CN(int n) { return NormSpec{NormKind::CN, n}; }
    static NormSpec CNeta(int n, double eta) { return NormSpec{NormKind::CNeta, n, eta}; }
    static NormSpec LpC(double p) {
        NormSpec s;
        s.kind = NormKind::LptCx;
        s.p = p;
        return s;
    }
    static NormSpec CtHs(double sexp) {
        NormSpec s;
        s.kind = NormKind::CtHs;
        s.s = sexp;
        return s;
    }
};

// Spatial estimators at one time sample.
double sup_norm(const ScalarField& f);
double sup_norm(const VectorField& f);
double sup_norm(const SymTensorField& f);

double holder_cn(const ScalarField& f, int N);
double holder_cn(const VectorField& f, int N);
double holder_cn(const SymTensorField& f, int N);

double holder_seminorm(const ScalarField& f, double eta, int window);
double holder_cn_eta(const ScalarField& f, int N, double eta, int window);

// Centered finite difference in time (second-order one-sided at ends).
template <class F>
TimeField<F> time_derivative(const TimeField<F>& f);

double estimate_norm(const TimeField<ScalarField>& f, const NormSpec& spec);
double estimate_norm(const TimeField<VectorField>& f, const NormSpec& spec);
double estimate_norm(const TimeField<SymTensorField>& f, const NormSpec& spec);

// L^p_t of a per-sample scalar series via Simpson (p = inf -> max).
double lp_time(const std::vector<double>& vals, double p, double T);

}  // namespace ciw
