#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ciw/norms.hpp"
#include "ciw/ops.hpp"
#include "ciw/synthetic.hpp"

using namespace ciw;

namespace {

VectorField random_meanfree_vector(const GridPtr& g, std::uint64_t seed, int kmax = 6) {
    VectorField v(g);
    for (int a = 0; a < g->dim(); ++a)
        v.c[a] = TrigPoly::random(g->dim(), kmax, 10, seed + a).sample(g);
    return v;
}

double tensor_diff_sup(const SymTensorField& a, const SymTensorField& b) {
    double m = 0.0;
    for (size_t c = 0; c < a.c.size(); ++c)
        for (std::int64_t p = 0; p < a.grid->points(); ++p)
            m = std::max(m, std::fabs(a.c[c].v[p] - b.c[c].v[p]));
    return m;
}

}  // namespace

TEST_CASE("inverse divergence: frozen single-mode symbol values (d = 2)") {
    // oracle: hand evaluation of the four-term symbol at xi = (1,0) gives
    // R(cos(x1) e1) = [[sin x1, 0], [0, -sin x1]]
    auto g = make_grid(2, 16, 2, 1.0);
    VectorField v(g);
    std::array<int, 3> j;
    for (std::int64_t p = 0; p < g->points(); ++p) {
        g->phys_coords(p, j);
        v.c[0].v[p] = std::cos(g->node(j[0]));
    }
    SymTensorField r = inverse_divergence(v);
    for (std::int64_t p = 0; p < g->points(); ++p) {
        g->phys_coords(p, j);
        double s = std::sin(g->node(j[0]));
        CHECK(r.c[0].v[p] == doctest::Approx(s).epsilon(1e-12));
        CHECK(std::fabs(r.c[1].v[p]) <= 1e-13);
        CHECK(r.c[2].v[p] == doctest::Approx(-s).epsilon(1e-12));
    }
}

TEST_CASE("inverse divergence: zero maps to zero, non-mean-free input rejected") {
    auto g = make_grid(2, 16, 2, 1.0);
    VectorField z(g);
    CHECK(inverse_divergence(z).max_frobenius() <= 1e-15);
    VectorField bad(g);
    bad.c[0] = ScalarField(g, 1.0);
    CHECK_THROWS_AS((void)inverse_divergence(bad), AssertionError);
}

TEST_CASE("inverse divergence: div(Rv) = v, symmetry, trace-free on random fields") {
    for (int d : {2, 3}) {
        auto g = make_grid(d, 64, 2, 1.0);
        VectorField v = random_meanfree_vector(g, 101 + d);
        SymTensorField R = inverse_divergence(v);
        VectorField dv = divergence(R);
        double verr = 0.0;
        for (int a = 0; a < d; ++a)
            for (std::int64_t p = 0; p < g->points(); ++p)
                verr = std::max(verr, std::fabs(dv.c[a].v[p] - v.c[a].v[p]));
        CHECK(verr <= 1e-10 * sup_norm(v));
        CHECK(trace(R).max_abs() <= 1e-12 * R.max_frobenius());
    }
}

TEST_CASE("leray projection: gradients die, solenoidal modes survive, idempotent") {
    auto g = make_grid(2, 32, 2, 1.0);
    ScalarField f = TrigPoly::random(2, 5, 8, 7).sample(g);
    VectorField grad_f = gradient(f);
    CHECK(leray_project(grad_f).max_norm() <= 1e-12 * std::max(1.0, grad_f.max_norm()));

    // (-xi2, xi1) mode: already solenoidal
    VectorField w(g);
    std::array<int, 3> j;
    for (std::int64_t p = 0; p < g->points(); ++p) {
        g->phys_coords(p, j);
        double arg = 2.0 * g->node(j[0]) + 1.0 * g->node(j[1]);
        w.c[0].v[p] = -1.0 * std::cos(arg);
        w.c[1].v[p] = 2.0 * std::cos(arg);
    }
    VectorField pw = leray_project(w);
    double err = 0.0;
    for (int a = 0; a < 2; ++a)
        for (std::int64_t p = 0; p < g->points(); ++p)
            err = std::max(err, std::fabs(pw.c[a].v[p] - w.c[a].v[p]));
    CHECK(err <= 1e-12 * w.max_norm());

    VectorField v = random_meanfree_vector(g, 13);
    VectorField p1 = leray_project(v);
    VectorField p2 = leray_project(p1);
    double ierr = 0.0;
    for (int a = 0; a < 2; ++a)
        for (std::int64_t p = 0; p < g->points(); ++p)
            ierr = std::max(ierr, std::fabs(p2.c[a].v[p] - p1.c[a].v[p]));
    CHECK(ierr <= 1e-12 * p1.max_norm());
    CHECK(divergence(p1).max_abs() <= 1e-12 * std::max(1.0, p1.max_norm()) * g->n());
}

TEST_CASE("mode filters: projections, identity decomposition, high-pass shells") {
    auto g = make_grid(2, 32, 2, 1.0);
    CHECK(nonzero_modes(ScalarField(g, 4.0)).max_abs() <= 1e-14);

    ScalarField f = TrigPoly::random(2, 6, 10, 5, false).sample(g);
    ScalarField rebuilt = nonzero_modes(f) + ScalarField(g, f.mean());
    double err = 0.0;
    for (std::int64_t p = 0; p < g->points(); ++p)
        err = std::max(err, std::fabs(rebuilt.v[p] - f.v[p]));
    CHECK(err <= 1e-14 * std::max(1.0, f.max_abs()));

    // idempotent and self-adjoint
    ScalarField h1 = high_pass(f, 4.0);
    ScalarField h2 = high_pass(h1, 4.0);
    double ierr = 0.0;
    for (std::int64_t p = 0; p < g->points(); ++p)
        ierr = std::max(ierr, std::fabs(h2.v[p] - h1.v[p]));
    CHECK(ierr <= 1e-13 * std::max(1.0, h1.max_abs()));

    ScalarField b = TrigPoly::random(2, 6, 10, 6).sample(g);
    double lhs = 0.0, rhs = 0.0;
    ScalarField hb = high_pass(b, 4.0);
    for (std::int64_t p = 0; p < g->points(); ++p) {
        lhs += h1.v[p] * b.v[p];
        rhs += f.v[p] * hb.v[p];
    }
    CHECK(std::fabs(lhs - rhs) / g->points() <= 1e-12);

    // energy after high_pass(lambda/2) sits at |xi| >= lambda/2
    Spectrum s = to_spectral(h1);
    std::array<int, 3> xi;
    double low = 0.0;
    for (std::int64_t i = 0; i < g->spec_size(); ++i) {
        g->spec_freq(i, xi);
        double kk = std::sqrt(double(xi[0]) * xi[0] + double(xi[1]) * xi[1]);
        if (kk < 4.0) low += std::abs(s.c[i]);
    }
    CHECK(low <= 1e-14);
}

TEST_CASE("R grad and R div act as order-zero operators across resolutions") {
    // measured C^eps operator norm stays below a fixed constant
    const double bound = 12.0;
    for (int n : {32, 64, 128}) {
        auto g = make_grid(2, n, 2, 1.0);
        TrigPoly poly = TrigPoly::random(2, 6, 10, 99);
        ScalarField f = poly.sample(g);
        SymTensorField rg = inv_div_of_grad(f);
        double in = holder_cn_eta(f, 0, 0.5, 3);
        double out = 0.0;
        for (const auto& comp : rg.c)
            out = std::max(out, holder_cn_eta(comp, 0, 0.5, 3));
        CHECK(out <= bound * in);
    }
}

TEST_CASE("modulated inverse divergence matches the plain operator on resolved data") {
    // for a resolved modulation the shifted-symbol route and the grid route
    // must agree to rounding
    auto g = make_grid(2, 64, 2, 1.0);
    VectorField v(g);
    v.c[0] = TrigPoly::random(2, 3, 6, 55).sample(g);
    v.c[1] = TrigPoly::random(2, 3, 6, 56).sample(g);
    std::array<int, 3> K{8, 4, 0};

    auto [re, im] = modulated_inverse_divergence(v, K);

    // grid route: multiply by cos/sin and apply R on the samples
    VectorField vc(g), vs(g);
    std::array<int, 3> j;
    for (std::int64_t p = 0; p < g->points(); ++p) {
        g->phys_coords(p, j);
        double arg = K[0] * g->node(j[0]) + K[1] * g->node(j[1]);
        for (int a = 0; a < 2; ++a) {
            vc.c[a].v[p] = v.c[a].v[p] * std::cos(arg);
            vs.c[a].v[p] = v.c[a].v[p] * std::sin(arg);
        }
    }
    SymTensorField re_grid = inverse_divergence(vc);
    SymTensorField im_grid = inverse_divergence(vs);
    double scale = std::max(1.0, re_grid.max_frobenius());
    CHECK(tensor_diff_sup(re, re_grid) <= 1e-10 * scale);
    CHECK(tensor_diff_sup(im, im_grid) <= 1e-10 * scale);
}
