#include "profile.hpp"

#include <cmath>

namespace ciw {

double bump(double v) {
    double q = 1.0 - v * v;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double bump_d1(double v) {
    double q = 1.0 - v * v;
    if (q <= 0.0) return 0.0;
    return bump(v) * (-2.0 * v) / (q * q);
}

double bump_d2(double v) {
    double q = 1.0 - v * v;
    if (q <= 0.0) return 0.0;
    double b = bump(v);
    return b * (4.0 * v * v / (q * q * q * q) - 2.0 / (q * q) - 8.0 * v * v / (q * q * q));
}

// b'(v)/v, continuous through v = 0
static double bump_d1_over_v(double v) {
    double q = 1.0 - v * v;
    if (q <= 0.0) return 0.0;
    return bump(v) * (-2.0) / (q * q);
}

SpatialProfile::SpatialProfile(int d, double r0) : d_(d), r0_(r0) {
    if (d != 2 && d != 3) throw Error("SpatialProfile: d must be 2 or 3");
    if (!(r0 > 0.0) || r0 > 1.0) throw Error("SpatialProfile: need 0 < r0 <= 1");
    s_ = 1.0;
    double I;
    if (d == 2) {
        I = integrate([this](double y) { double v = phi_raw_1d(y); return v * v; }, -r0_, r0_,
                      4096) /
            (2.0 * M_PI);
    } else {
        I = integrate([this](double r) { double v = phi_raw_radial(r); return v * v * r; }, 0.0,
                      r0_, 4096) /
            (2.0 * M_PI);
    }
    s_ = 1.0 / std::sqrt(I);
    c_ = 1.0;  // by construction; re-measured below for the record
    if (d == 2) {
        c_ = integrate([this](double y) { double p[1] = {y}; double v = phi(p); return v * v; },
                       -r0_, r0_, 4096) /
             (2.0 * M_PI);
    } else {
        c_ = integrate(
                 [this](double r) {
                     double p[2] = {r, 0.0};
                     double v = phi(p);
                     return v * v * r;
                 },
                 0.0, r0_, 4096) /
             (2.0 * M_PI);
    }
}

double SpatialProfile::phi_raw_1d(double y) const { return -bump_d2(y / r0_) / (r0_ * r0_); }

double SpatialProfile::phi_raw_radial(double r) const {
    double v = r / r0_;
    return -(bump_d2(v) + bump_d1_over_v(v)) / (r0_ * r0_);
}

double SpatialProfile::phi(const double* y) const {
    if (d_ == 2) return s_ * phi_raw_1d(y[0]);
    double r = std::sqrt(y[0] * y[0] + y[1] * y[1]);
    return s_ * phi_raw_radial(r);
}

double SpatialProfile::Phi(const double* y) const {
    if (d_ == 2) return s_ * bump(y[0] / r0_);
    double r = std::sqrt(y[0] * y[0] + y[1] * y[1]);
    return s_ * bump(r / r0_);
}

void SpatialProfile::grad_Phi(const double* y, double* out) const {
    if (d_ == 2) {
        out[0] = s_ * bump_d1(y[0] / r0_) / r0_;
        return;
    }
    double f = s_ * bump_d1_over_v(std::sqrt(y[0] * y[0] + y[1] * y[1]) / r0_) / (r0_ * r0_);
    out[0] = f * y[0];
    out[1] = f * y[1];
}

double SpatialProfile::phi_mean() const {
    if (d_ == 2)
        return integrate([this](double y) { double p[1] = {y}; return phi(p); }, -r0_, r0_, 4096) /
               (2.0 * M_PI);
    return integrate(
               [this](double r) {
                   double p[2] = {r, 0.0};
                   return phi(p) * r;
               },
               0.0, r0_, 4096) /
           (2.0 * M_PI);
}

std::vector<double> SpatialProfile::phi_sq_fourier(int mmax) const {
    if (d_ != 2) throw Error("phi_sq_fourier: implemented for d = 2");
    std::vector<double> out(mmax + 1);
    for (int m = 0; m <= mmax; ++m) {
        int panels = 2048 + 8 * m;
        out[m] = integrate(
                     [this, m](double y) {
                         double p[1] = {y};
                         double v = phi(p);
                         return v * v * std::cos(m * y);
                     },
                     -r0_, r0_, panels) /
                 (2.0 * M_PI);
    }
    return out;
}

std::vector<double> SpatialProfile::phi_fourier(int mmax) const {
    if (d_ != 2) throw Error("phi_fourier: implemented for d = 2");
    std::vector<double> out(mmax + 1);
    for (int m = 0; m <= mmax; ++m) {
        int panels = 2048 + 8 * m;
        out[m] = integrate(
                     [this, m](double y) {
                         double p[1] = {y};
                         return phi(p) * std::cos(m * y);
                     },
                     -r0_, r0_, panels) /
                 (2.0 * M_PI);
    }
    return out;
}

double SpatialProfile::phi_sup() const {
    double best = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double y = -r0_ + 2.0 * r0_ * i / 20000.0;
        double p[2] = {y, 0.0};
        best = std::max(best, std::fabs(phi(p)));
    }
    return best;
}

double SpatialProfile::dphi_sup() const {
    double best = 0.0, hh = r0_ / 20000.0;
    for (int i = 1; i < 20000; ++i) {
        double y = -r0_ + 2.0 * r0_ * i / 20000.0;
        double pa[2] = {y + hh, 0.0}, pb[2] = {y - hh, 0.0};
        best = std::max(best, std::fabs(phi(pa) - phi(pb)) / (2.0 * hh));
    }
    return best;
}

double SpatialProfile::grad_Phi_sup() const {
    double best = 0.0;
    double out[2];
    for (int i = 0; i <= 20000; ++i) {
        double y = -r0_ + 2.0 * r0_ * i / 20000.0;
        double p[2] = {y, 0.0};
        grad_Phi(p, out);
        double n = d_ == 2 ? std::fabs(out[0]) : std::sqrt(out[0] * out[0] + out[1] * out[1]);
        best = std::max(best, n);
    }
    return best;
}

// ---- temporal profile -------------------------------------------------------

namespace {

double bump_sq(double v) {
    double b = bump(v);
    return b * b;
}

const CumulativeSpline& bump_sq_cumulative() {
    static const CumulativeSpline table = cumulative_spline(bump_sq, -1.0, 1.0, 1 << 14);
    return table;
}

}  // namespace

TemporalProfile::TemporalProfile(int n_dirs, double tau, int sigma, double T, double base_width)
    : n_(n_dirs), tau_(tau), sigma_(sigma), T_(T), width_(base_width) {
    if (n_dirs < 1) throw Error("TemporalProfile: need at least one direction");
    if (!(tau >= 1.0)) throw Error("TemporalProfile: tau must be >= 1");
    if (sigma < 1) throw Error("TemporalProfile: sigma must be a positive integer");
    if (!(base_width > 0.0) || n_dirs * base_width > T)
        throw Error(strformat("TemporalProfile: shifts overflow the horizon (%d * %g > %g)",
                              n_dirs, base_width, T));
    shift_.resize(n_);
    double slot = T_ / n_;
    for (int k = 0; k < n_; ++k) shift_[k] = k * slot + 0.5 * (slot - width_);
    double Ib2 = bump_sq_cumulative().total();
    amp_ = std::sqrt(2.0 * T_ / (width_ * Ib2));
}

std::pair<double, double> TemporalProfile::base_support(int k) const {
    return {shift_[k], shift_[k] + width_};
}

double TemporalProfile::base_g(int k, double u) const {
    double v = 2.0 * (u - shift_[k]) / width_ - 1.0;
    return amp_ * bump(v);
}

double TemporalProfile::base_g_sq_int(double v) const {
    // integral of (amp * bump)^2 from the bump start, in the local coordinate
    // v in [-1, 1]
    return amp_ * amp_ * (width_ / 2.0) * bump_sq_cumulative()(v);
}

double TemporalProfile::g(int k, double t) const {
    double u = std::fmod(sigma_ * t, T_);
    if (u < 0) u += T_;
    double ubase = tau_ * u;
    if (ubase < shift_[k] || ubase > shift_[k] + width_) return 0.0;
    return std::sqrt(tau_) * base_g(k, ubase);
}

double TemporalProfile::dg(int k, double t) const {
    double u = std::fmod(sigma_ * t, T_);
    if (u < 0) u += T_;
    double ubase = tau_ * u;
    if (ubase < shift_[k] || ubase > shift_[k] + width_) return 0.0;
    double v = 2.0 * (ubase - shift_[k]) / width_ - 1.0;
    return std::sqrt(tau_) * amp_ * bump_d1(v) * (2.0 / width_) * tau_ * sigma_;
}

double TemporalProfile::h(int k, double t) const {
    double u = std::fmod(sigma_ * t, T_);
    if (u < 0) u += T_;
    // h_base(u) = int_0^{tau u} g_k^2 - u
    double ubase = tau_ * u;
    double integral;
    if (ubase <= shift_[k]) {
        integral = 0.0;
    } else if (ubase >= shift_[k] + width_) {
        integral = T_;  // full bump mass (normalized so avg over [0,T] is 1)
    } else {
        double v = 2.0 * (ubase - shift_[k]) / width_ - 1.0;
        integral = base_g_sq_int(v);
    }
    return integral - u;
}

double TemporalProfile::g_sq_mean(int k) const {
    double a = shift_[k] / tau_, b = (shift_[k] + width_) / tau_;
    double I = integrate([this, k](double u) {
        double val = std::sqrt(tau_) * base_g(k, tau_ * u);
        return val * val;
    }, a, b, 4096);
    return I / T_;  // sigma wrapping is measure preserving
}

double TemporalProfile::g_lp(int k, double p) const {
    double a = shift_[k] / tau_, b = (shift_[k] + width_) / tau_;
    double I = integrate(
        [this, k, p](double u) {
            double val = std::sqrt(tau_) * std::fabs(base_g(k, tau_ * u));
            return std::pow(val, p);
        },
        a, b, 4096);
    return std::pow(I / T_, 1.0 / p) * std::pow(T_, 1.0 / p);
}

double TemporalProfile::dg_lp(int k, double p) const {
    double a = shift_[k] / tau_ / sigma_, b = (shift_[k] + width_) / tau_ / sigma_;
    double I = integrate(
        [this, k, p](double t) { return std::pow(std::fabs(dg(k, t)), p); }, a, b, 8192);
    return std::pow(sigma_ * I, 1.0 / p);  // sigma identical copies
}

double TemporalProfile::h_sup(int k) const {
    double best = 0.0;
    const int N = 1 << 15;
    for (int i = 0; i <= N; ++i) best = std::max(best, std::fabs(h(k, T_ * i / N)));
    return best;
}

}  // namespace ciw
