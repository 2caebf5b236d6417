#pragma once

#include <vector>

#include "quadrature.hpp"

namespace ciw {

// The standard smooth bump b(v) = exp(-1/(1-v^2)) on (-1,1), with derivatives.
double bump(double v);
double bump_d1(double v);
double bump_d2(double v);

// Spatial pipe profile in d-1 transverse variables: Phi = s * b(|y|/r0) with
// phi = -Lap Phi, normalized so (2pi)^{1-d} int phi^2 = 1 (to quadrature
// accuracy). All evaluations are closed-form.
class SpatialProfile {
public:
    SpatialProfile(int d, double r0);

    int dim() const { return d_; }
    double radius() const { return r0_; }
    double scale() const { return s_; }

    // transverse coordinates y (1 component for d=2, 2 for d=3)
    double phi(const double* y) const;
    double Phi(const double* y) const;
    void grad_Phi(const double* y, double* out) const;  // d-1 components

    // (2pi)^{1-d} int phi^2: equals 1 up to quadrature error
    double phi_sq_mean() const { return c_; }
    // int phi over R^{d-1} (zero in exact arithmetic)
    double phi_mean() const;

    // 1-D Fourier coefficients of the periodized phi^2 along a line through
    // the profile (d=2 only): coef[m] = (1/2pi) int phi^2(y) e^{-imy} dy,
    // real by symmetry. Used by the exact modulated-symbol evaluations.
    std::vector<double> phi_sq_fourier(int mmax) const;
    std::vector<double> phi_fourier(int mmax) const;

    // sup norms of phi and its first derivative (for scaling measurements)
    double phi_sup() const;
    double dphi_sup() const;
    double grad_Phi_sup() const;

private:
    int d_;
    double r0_;
    double s_ = 1.0;  // normalization scale applied to Phi
    double c_ = 1.0;  // measured (2pi)^{1-d} int phi^2 after normalization

    double phi_raw_1d(double y) const;      // -(d^2/dy^2) b(y/r0)
    double phi_raw_radial(double r) const;  // -(rr + (1/r) d_r) b(r/r0)
};

// Temporal blocks: per-direction shifted bumps g_k on [0,T], rescaled by tau,
// composed with sigma wrapping, and the balance primitive h. All closed-form;
// quadratures run on an internal fine grid, independent of any field grid.
class TemporalProfile {
public:
    TemporalProfile(int n_dirs, double tau, int sigma, double T, double base_width);

    int count() const { return n_; }
    double tau() const { return tau_; }
    int sigma() const { return sigma_; }
    double horizon() const { return T_; }

    // g_(k), its exact time derivative, and h_(k)
    double g(int k, double t) const;
    double dg(int k, double t) const;
    double h(int k, double t) const;

    // mean of g_(k)^2 over [0,T] by fine quadrature (should be 1)
    double g_sq_mean(int k) const;
    // L^p_t norm of g_(k) over [0,T] by fine quadrature
    double g_lp(int k, double p) const;
    double h_sup(int k) const;
    double dg_lp(int k, double p) const;

    // support windows of the unscaled base bumps (disjointness certificate)
    std::pair<double, double> base_support(int k) const;

private:
    int n_;
    double tau_;
    int sigma_;
    double T_;
    double width_;
    double amp_;                  // base amplitude, fixes avg g_k^2 = 1
    std::vector<double> shift_;   // base bump left endpoints
    std::vector<double> cumsq_;   // cumulative integral of g_base^2 (one bump at 0)
    double base_g(int k, double u) const;        // unscaled bump at base time u
    double base_g_sq_int(double u) const;        // int_0^u of bump^2 placed at 0
};

}  // namespace ciw
