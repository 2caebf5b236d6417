#include "synthetic.hpp"

#include <cmath>

#include "profile.hpp"
#include "spectral.hpp"

namespace ciw {

double TrigPoly::eval(const double* x, int d) const {
    double s = 0.0;
    for (const auto& m : modes) {
        double arg = m.phase;
        for (int a = 0; a < d; ++a) arg += m.xi[a] * x[a];
        s += m.amp * std::cos(arg);
    }
    return s;
}

ScalarField TrigPoly::sample(const GridPtr& g) const {
    ScalarField f(g);
    const int d = g->dim();
    std::array<int, 3> j;
    for (std::int64_t p = 0; p < g->points(); ++p) {
        g->phys_coords(p, j);
        double x[3] = {g->node(j[0]), g->node(j[1]), d == 3 ? g->node(j[2]) : 0.0};
        f.v[p] = eval(x, d);
    }
    return f;
}

TrigPoly TrigPoly::derivative(int axis) const {
    TrigPoly out;
    for (const auto& m : modes) {
        if (m.xi[axis] == 0) continue;
        // d/dx cos(arg) = -xi sin(arg) = xi cos(arg + pi/2)
        out.modes.push_back({m.xi, m.amp * m.xi[axis], m.phase + M_PI / 2.0});
    }
    return out;
}

TrigPoly TrigPoly::random(int d, int kmax, int count, std::uint64_t seed, bool mean_free) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ki(-kmax, kmax);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> am(0.2, 1.0);
    TrigPoly p;
    while (static_cast<int>(p.modes.size()) < count) {
        std::array<int, 3> xi{ki(rng), ki(rng), d == 3 ? ki(rng) : 0};
        if (mean_free && xi[0] == 0 && xi[1] == 0 && xi[2] == 0) continue;
        p.modes.push_back({xi, am(rng), ph(rng)});
    }
    return p;
}

VectorField solenoidal_sample(const GridPtr& g, const TrigPoly& stream, int pair_axis) {
    const int d = g->dim();
    VectorField out(g);
    int a0 = (pair_axis + 1) % 3, a1 = (pair_axis + 2) % 3;
    if (d == 2) {
        a0 = 0;
        a1 = 1;
    }
    // (m_{a0}, m_{a1}) = (d_{a1} psi, -d_{a0} psi): divergence vanishes and the
    // cancellation survives the grid because the modes are exactly resolved
    TrigPoly d0 = stream.derivative(a0);
    TrigPoly d1 = stream.derivative(a1);
    out.c[a0] = d1.sample(g);
    ScalarField tmp = d0.sample(g);
    out.c[a1] = -1.0 * tmp;
    return out;
}

TransportPair make_transport_pair(const GridPtr& g, double rho_contrast, double m_amp,
                                  std::uint64_t seed, bool time_windowed) {
    TransportPair tp;
    tp.rho = ScalarTimeField(g);
    tp.m = VectorTimeField(g);
    TrigPoly rho_shape = TrigPoly::random(g->dim(), 2, 4, seed, true);
    TrigPoly stream = TrigPoly::random(g->dim(), 2, 5, seed + 1, true);
    double sup = 0.0;
    ScalarField rho_x = rho_shape.sample(g);
    sup = rho_x.max_abs();
    double scale = sup > 0 ? rho_contrast / sup : 0.0;
    VectorField msol = solenoidal_sample(g, stream);
    double msup = msol.max_norm();
    double mscale = msup > 0 ? m_amp / msup : 0.0;

    const double T = g->horizon();
    for (int i = 0; i < g->nt(); ++i) {
        double t = g->time_at(i);
        double b = 1.0;
        if (time_windowed) {
            // C^inf window supported in [T/4, 3T/4]
            double v = (t - T / 2.0) / (T / 4.0);
            b = bump(v) / bump(0.0);
        }
        tp.rho.s[i] = ScalarField(g, 1.0);
        axpy(scale, rho_x, tp.rho.s[i]);
        tp.m.s[i] = VectorField(g);
        axpy(mscale * b, msol, tp.m.s[i]);
    }
    return tp;
}

ScalarField lacunary_scalar(const GridPtr& g, double beta, int kmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    TrigPoly p;
    const int d = g->dim();
    for (int f = 1; f <= kmax; f *= 2) {
        double amp = std::pow(double(f), -beta);
        std::array<int, 3> x1{f, (f > 2 ? f / 2 : 0), 0};
        std::array<int, 3> x2{(f > 2 ? -f / 2 : 0), f, 0};
        if (d == 3) x1[2] = f > 4 ? f / 4 : 0;
        p.modes.push_back({x1, amp, ph(rng)});
        p.modes.push_back({x2, amp, ph(rng)});
    }
    return p.sample(g);
}

TransportPair make_rough_pair(const GridPtr& g, double beta, int kmax, std::uint64_t seed) {
    TransportPair tp;
    tp.rho = ScalarTimeField(g);
    tp.m = VectorTimeField(g);

    ScalarField rho_x = lacunary_scalar(g, beta, kmax, seed);
    double rsup = rho_x.max_abs();
    double rscale = rsup > 0 ? 0.25 / rsup : 0.0;

    // rough stream function: one extra order of decay so the velocity is C^beta
    std::mt19937_64 rng(seed + 7);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    TrigPoly stream;
    for (int f = 1; f <= kmax; f *= 2) {
        double amp = std::pow(double(f), -beta - 1.0);
        std::array<int, 3> x1{f, (f > 2 ? f / 2 : 0), 0};
        std::array<int, 3> x2{(f > 2 ? -f / 2 : 0), f, 0};
        stream.modes.push_back({x1, amp, ph(rng)});
        stream.modes.push_back({x2, amp, ph(rng)});
    }
    VectorField m = solenoidal_sample(g, stream);
    double msup = m.max_norm();
    double mscale = msup > 0 ? 1.0 / msup : 0.0;

    const double T = g->horizon();
    for (int i = 0; i < g->nt(); ++i) {
        double t = g->time_at(i);
        double b = 0.5 + 0.5 * std::cos(M_PI * (t / T - 0.5));  // gentle time envelope
        tp.rho.s[i] = ScalarField(g, 1.0);
        axpy(rscale, rho_x, tp.rho.s[i]);
        tp.m.s[i] = VectorField(g);
        axpy(mscale * b, m, tp.m.s[i]);
    }
    return tp;
}

}  // namespace ciw
