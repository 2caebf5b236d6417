#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ciw/mollify.hpp"
#include "ciw/norms.hpp"
#include "ciw/quadrature.hpp"
#include "ciw/spectral.hpp"
#include "ciw/synthetic.hpp"

using namespace ciw;

namespace {

ScalarField sample_fn(const GridPtr& g, double (*fn)(double, double)) {
    ScalarField f(g);
    std::array<int, 3> j;
    for (std::int64_t p = 0; p < g->points(); ++p) {
        g->phys_coords(p, j);
        f.v[p] = fn(g->node(j[0]), g->node(j[1]));
    }
    return f;
}

}  // namespace

TEST_CASE("transform: constant field is a pure DC mode") {
    auto g = make_grid(2, 16, 2, 1.0);
    ScalarField f(g, 3.25);
    Spectrum s = to_spectral(f);
    CHECK(coefficient(s, {0, 0, 0}).real() == doctest::Approx(3.25).epsilon(1e-14));
    double off = 0.0;
    for (std::int64_t i = 1; i < g->spec_size(); ++i) off = std::max(off, std::abs(s.c[i]));
    CHECK(off <= 1e-14);
}

TEST_CASE("transform: cos(x1) lives at xi = (+-1, 0) with coefficient 1/2") {
    auto g = make_grid(2, 16, 2, 1.0);
    ScalarField f = sample_fn(g, [](double x, double) { return std::cos(x); });
    Spectrum s = to_spectral(f);
    CHECK(coefficient(s, {1, 0, 0}).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(coefficient(s, {-1, 0, 0}).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(coefficient(s, {1, 0, 0}).imag()) <= 1e-14);
    CHECK(std::abs(coefficient(s, {2, 0, 0})) <= 1e-14);
}

TEST_CASE("transform: round trip and direct-summation oracle on a random band-limited field") {
    for (int d : {2, 3}) {
        auto g = make_grid(d, 32, 2, 1.0);
        TrigPoly poly = TrigPoly::random(d, 6, 12, 77 + d);
        ScalarField f = poly.sample(g);

        ScalarField back = to_physical(to_spectral(f));
        double err = 0.0;
        for (std::int64_t p = 0; p < g->points(); ++p)
            err = std::max(err, std::fabs(back.v[p] - f.v[p]));
        CHECK(err <= 1e-12 * f.max_abs());

        // 5 random points: reconstruct the interpolant from the coefficients
        Spectrum s = to_spectral(f);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> ux(-M_PI, M_PI);
        for (int trial = 0; trial < 5; ++trial) {
            double x[3] = {ux(rng), ux(rng), d == 3 ? ux(rng) : 0.0};
            // oracle: evaluate the trig polynomial directly
            double want = poly.eval(x, d);
            // spectral evaluation: sum over stored modes with Hermitian weight
            cplx acc(0.0);
            std::array<int, 3> xi;
            for (std::int64_t i = 0; i < g->spec_size(); ++i) {
                g->spec_freq(i, xi);
                double arg = xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
                cplx e = std::polar(1.0, arg);
                acc += s.c[i] * e;
                if (xi[d - 1] != 0 && xi[d - 1] != g->n() / 2)
                    acc += std::conj(s.c[i]) * std::conj(e);
            }
            CHECK(acc.real() == doctest::Approx(want).epsilon(1e-10));
        }
    }
}

TEST_CASE("transform: Parseval identity") {
    auto g = make_grid(2, 32, 2, 1.0);
    ScalarField f = TrigPoly::random(2, 6, 10, 11).sample(g);
    double phys = 0.0;
    for (double v : f.v) phys += v * v;
    phys /= g->points();
    double spec = spectral_energy(to_spectral(f));
    CHECK(spec == doctest::Approx(phys).epsilon(1e-12));
}

TEST_CASE("derivative: d/dx1 sin(x1) = cos(x1), derivative of constant vanishes") {
    auto g = make_grid(2, 16, 2, 1.0);
    ScalarField f = sample_fn(g, [](double x, double) { return std::sin(x); });
    ScalarField want = sample_fn(g, [](double x, double) { return std::cos(x); });
    ScalarField got = derivative(f, {1, 0, 0});
    double err = 0.0;
    for (std::int64_t p = 0; p < g->points(); ++p)
        err = std::max(err, std::fabs(got.v[p] - want.v[p]));
    CHECK(err <= 1e-12);

    ScalarField c(g, 2.0);
    CHECK(derivative(c, {1, 0, 0}).max_abs() <= 1e-14);
}

TEST_CASE("fractional laplacian: multiplier value, constants, and alpha = 1") {
    auto g = make_grid(2, 32, 2, 1.0);
    // |xi| = 2 via xi = (2,0); alpha = 0.5 multiplies by |xi|^{2a} = 2
    ScalarField f = sample_fn(g, [](double x, double) { return std::cos(2.0 * x); });
    ScalarField got = fractional_laplacian(f, 0.5);
    double err = 0.0;
    for (std::int64_t p = 0; p < g->points(); ++p)
        err = std::max(err, std::fabs(got.v[p] - 2.0 * f.v[p]));
    CHECK(err <= 1e-12);

    CHECK(fractional_laplacian(ScalarField(g, 1.5), 0.7).max_abs() <= 1e-14);

    ScalarField h = TrigPoly::random(2, 5, 8, 3).sample(g);
    ScalarField lap = fractional_laplacian(h, 1.0);
    ScalarField lap2 = -1.0 * (derivative(h, {2, 0, 0}) + derivative(h, {0, 2, 0}));
    double e2 = 0.0;
    for (std::int64_t p = 0; p < g->points(); ++p)
        e2 = std::max(e2, std::fabs(lap.v[p] - lap2.v[p]));
    CHECK(e2 <= 1e-12 * lap.max_abs());
    CHECK_THROWS(fractional_laplacian(h, 0.0));
}

TEST_CASE("fractional laplacian is self-adjoint for the grid inner product") {
    auto g = make_grid(2, 32, 2, 1.0);
    ScalarField a = TrigPoly::random(2, 6, 9, 21).sample(g);
    ScalarField b = TrigPoly::random(2, 6, 9, 22).sample(g);
    ScalarField Aa = fractional_laplacian(a, 0.6);
    ScalarField Ab = fractional_laplacian(b, 0.6);
    double lhs = 0.0, rhs = 0.0;
    for (std::int64_t p = 0; p < g->points(); ++p) {
        lhs += Aa.v[p] * b.v[p];
        rhs += a.v[p] * Ab.v[p];
    }
    lhs /= g->points();
    rhs /= g->points();
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(lhs)));
}

TEST_CASE("mollify: constants, single-mode damping oracle, mean preservation") {
    auto g = make_grid(2, 64, 5, 1.0);

    // constant-in-time constant field is exactly preserved
    ScalarTimeField cf(g);
    for (auto& s : cf.s) s = ScalarField(g, 2.5);
    auto out = mollify(cf, 0.7, 0.1);
    double err = 0.0;
    for (auto& s : out.s)
        for (double v : s.v) err = std::max(err, std::fabs(v - 2.5));
    CHECK(err <= 1e-13);

    // single Fourier mode: damped by the 1-D quadrature coefficient of the bump
    const double ell = 0.5;
    ScalarField mode = sample_fn(g, [](double x, double y) { return std::cos(3.0 * x + y); });
    ScalarTimeField mf(g);
    for (auto& s : mf.s) s = mode;
    auto mo = mollify(mf, ell, 0.0);
    // independent oracle: Gauss-type quadrature with a different panel count
    auto psi = [](double u) { double q = 1 - u * u; return q > 0 ? std::exp(-1.0 / q) : 0.0; };
    double mass = integrate(psi, -1, 1, 1777);
    auto hat = [&](int k) {
        return integrate([&](double u) { return psi(u) * std::cos(k * ell * u); }, -1, 1, 1777) /
               mass;
    };
    double want = hat(3) * hat(1);
    for (std::int64_t p = 0; p < g->points(); ++p)
        CHECK(mo.s[2].v[p] == doctest::Approx(want * mode.v[p]).epsilon(1e-8));

    // spatial mean is untouched sample by sample
    ScalarTimeField rf(g);
    TrigPoly poly = TrigPoly::random(2, 5, 8, 9, false);
    for (int i = 0; i < g->nt(); ++i) rf.s[i] = poly.sample(g);
    auto ro = mollify(rf, 0.3, 0.2);
    for (int i = 0; i < g->nt(); ++i)
        CHECK(std::fabs(ro.s[i].mean() - rf.s[i].mean()) <= 1e-12 * std::fabs(rf.s[i].mean()));
}

TEST_CASE("mollify commutes with derivative on band-limited fields") {
    auto g = make_grid(2, 64, 3, 1.0);
    ScalarTimeField f(g);
    for (int i = 0; i < g->nt(); ++i) f.s[i] = TrigPoly::random(2, 6, 8, 31 + i).sample(g);
    auto a = mollify(f, 0.4, 0.0);
    for (int i = 0; i < g->nt(); ++i) {
        ScalarField da = derivative(a.s[i], {1, 1, 0});
        ScalarField bd = mollify_space(derivative(f.s[i], {1, 1, 0}), 0.4);
        double err = 0.0;
        for (std::int64_t p = 0; p < g->points(); ++p)
            err = std::max(err, std::fabs(da.v[p] - bd.v[p]));
        CHECK(err <= 1e-10 * std::max(1.0, bd.max_abs()));
    }
}

TEST_CASE("mollify: unresolvable width warns but proceeds") {
    auto g = make_grid(2, 16, 3, 1.0);
    ScalarTimeField f(g);
    for (auto& s : f.s) s = ScalarField(g, 1.0);
    MollifyDiagnostics diag;
    auto out = mollify(f, 0.1, 0.0, &diag);
    CHECK(diag.warnings.size() == 1);
    CHECK(out.s[0].v[0] == doctest::Approx(1.0));
}

TEST_CASE("estimate_norm: sup of sin, L2-in-time of a constant, CtHs sanity") {
    auto g = make_grid(2, 64, 9, 1.0);
    ScalarTimeField f(g);
    for (auto& s : f.s) s = sample_fn(g, [](double x, double) { return std::sin(x); });
    CHECK(estimate_norm(f, NormSpec::C0()) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(estimate_norm(f, NormSpec::LpC(2.0)) == doctest::Approx(1.0).epsilon(1e-3));

    // H^s of cos(x1): sqrt(2 * (1+1)^s * 1/4)
    ScalarTimeField h(g);
    for (auto& s : h.s) s = sample_fn(g, [](double x, double) { return std::cos(x); });
    double want = std::sqrt(2.0 * std::pow(2.0, -1.0) * 0.25);
    CHECK(estimate_norm(h, NormSpec::CtHs(-1.0)) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("simpson weights integrate cubics exactly; trapezoid tail for even counts") {
    auto w = simpson_weights(9, 2.0);
    double acc = 0.0;
    for (int i = 0; i < 9; ++i) {
        double t = 2.0 * i / 8;
        acc += w[i] * t * t * t;
    }
    CHECK(acc == doctest::Approx(4.0).epsilon(1e-12));
    auto we = simpson_weights(8, 1.0);
    double s = 0.0;
    for (double x : we) s += x;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}
