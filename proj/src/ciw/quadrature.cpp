#include "quadrature.hpp"

#include <cmath>

namespace ciw {

std::vector<double> simpson_weights(int nt, double T) {
    if (nt < 2) throw Error("simpson_weights: need at least two samples");
    const double h = T / (nt - 1);
    std::vector<double> w(nt, 0.0);
    if (nt == 2) {
        w[0] = w[1] = h / 2.0;
        return w;
    }
    int last = (nt % 2 == 1) ? nt - 1 : nt - 2;  // simpson span; trapezoid tail if even
    for (int i = 0; i + 2 <= last; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if (nt % 2 == 0) {
        w[nt - 2] += h / 2.0;
        w[nt - 1] += h / 2.0;
    }
    return w;
}

double integrate(const std::function<double(double)>& f, double a, double b, int m) {
    const int nseg = 2 * m;
    const double h = (b - a) / nseg;
    double s = f(a) + f(b);
    for (int i = 1; i < nseg; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

std::vector<double> cumulative_table(const std::function<double(double)>& f, double a, double b,
                                     int cells) {
    std::vector<double> out(cells + 1, 0.0);
    const double h = (b - a) / cells;
    for (int i = 0; i < cells; ++i)
        out[i + 1] = out[i] + integrate(f, a + i * h, a + (i + 1) * h, 4);
    return out;
}

double table_interp(const std::vector<double>& table, double a, double b, double x) {
    const int cells = static_cast<int>(table.size()) - 1;
    double u = (x - a) / (b - a) * cells;
    if (u <= 0.0) return table.front();
    if (u >= cells) return table.back();
    int i = static_cast<int>(u);
    double w = u - i;
    return table[i] * (1.0 - w) + table[i + 1] * w;
}

double CumulativeSpline::operator()(double x) const {
    const int cells = static_cast<int>(val.size()) - 1;
    if (x <= a) return val.front();
    if (x >= b) return val.back();
    const double h = (b - a) / cells;
    double u = (x - a) / h;
    int i = std::min(static_cast<int>(u), cells - 1);
    double t = u - i;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * val[i] + h * h10 * der[i] + h01 * val[i + 1] + h * h11 * der[i + 1];
}

CumulativeSpline cumulative_spline(const std::function<double(double)>& f, double a, double b,
                                   int cells) {
    CumulativeSpline s;
    s.a = a;
    s.b = b;
    s.val = cumulative_table(f, a, b, cells);
    s.der.resize(cells + 1);
    const double h = (b - a) / cells;
    for (int i = 0; i <= cells; ++i) s.der[i] = f(a + i * h);
    return s;
}

LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw Error("loglog_fit: need >= 3 points");
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error("loglog_fit: points must be positive");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    double den = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double pred = fit.slope * std::log(x[i]) + fit.intercept;
        double e = std::log(y[i]) - pred;
        ss_res += e * e;
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace ciw
