#pragma once

#include <functional>
#include <vector>

#include "util.hpp"

namespace ciw {

// Composite-Simpson weights for n_t uniform samples spanning [0,T].
// Even sample counts get a trapezoid tail on the last interval.
std::vector<double> simpson_weights(int nt, double T);

// Composite Simpson of a callable over [a,b] with 2*m panels.
double integrate(const std::function<double(double)>& f, double a, double b, int m = 2048);

// Uniform table of a callable's cumulative integral: out[i] = int_a^{x_i} f,
// x_i = a + i*(b-a)/(cells). Each cell is integrated with 8-panel Simpson.
std::vector<double> cumulative_table(const std::function<double(double)>& f, double a, double b,
                                     int cells);

// Linear interpolation in a uniform table over [a,b].
double table_interp(const std::vector<double>& table, double a, double b, double x);

// Cumulative integral with Hermite-cubic evaluation: the stored derivative is
// the integrand itself, so the interpolation error is O(h^4).
struct CumulativeSpline {
    double a = 0.0, b = 1.0;
    std::vector<double> val;  // cumulative integral at the knots
    std::vector<double> der;  // integrand at the knots

    double operator()(double x) const;
    double total() const { return val.back(); }
};

CumulativeSpline cumulative_spline(const std::function<double(double)>& f, double a, double b,
                                   int cells);

// Least-squares line fit of log(y) against log(x): returns slope, intercept,
// and R^2. Requires >= 3 positive points.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ciw
