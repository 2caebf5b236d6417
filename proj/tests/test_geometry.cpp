#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ciw/geometry.hpp"

using namespace ciw;

namespace {

int sym_count(int d) { return d * (d + 1) / 2; }

// reassembly oracle: sum_k c_k (k x k) componentwise
std::vector<double> reassemble(const DirectionSet& ds, const std::vector<double>& gam) {
    const int d = ds.dim;
    std::vector<double> out(sym_count(d), 0.0);
    for (int k = 0; k < ds.count(); ++k) {
        auto kv = ds.dirs[k].unit(0);
        int c = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j, ++c) out[c] += gam[k] * gam[k] * kv[i] * kv[j];
    }
    return out;
}

std::vector<double> random_near_id(const DirectionSet& ds, std::mt19937_64& rng, double radius) {
    const int d = ds.dim;
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ur(0.0, radius);
    std::vector<double> e(sym_count(d));
    double f2 = 0.0;
    int c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++c) {
            e[c] = nd(rng);
            f2 += (i == j ? 1.0 : 2.0) * e[c] * e[c];
        }
    double r = ur(rng) / std::sqrt(f2);
    std::vector<double> v(sym_count(d), 0.0);
    c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++c) v[c] = (i == j ? 1.0 : 0.0) + r * e[c];
    return v;
}

}  // namespace

TEST_CASE("direction sets: cardinality, integer frames, positive identity coefficients") {
    for (int d : {2, 3}) {
        DirectionSet ds = build_direction_set(d);
        CHECK(ds.count() == sym_count(d));
        CHECK(ds.N_Lambda == 5);
        CHECK(ds.eps_u > 0.05);
        CHECK(ds.cond_M < 100.0);
        for (const auto& dir : ds.dirs) {
            // N * frame rows are integer vectors: exact in long arithmetic
            for (int r = 0; r < d; ++r)
                for (int a = 0; a < d; ++a)
                    CHECK((ds.N_Lambda * dir.frame_num[r][a]) % dir.den == 0);
        }
        for (double c : ds.c_id) CHECK(c > 0.0);
    }
}

TEST_CASE("gamma coefficients: identity reconstructs exactly") {
    for (int d : {2, 3}) {
        DirectionSet ds = build_direction_set(d);
        std::vector<double> vid(sym_count(d), 0.0);
        int c = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j, ++c) vid[c] = (i == j) ? 1.0 : 0.0;
        auto gam = gamma_coefficients(ds, vid);
        auto back = reassemble(ds, gam);
        for (int i = 0; i < sym_count(d); ++i)
            CHECK(std::fabs(back[i] - vid[i]) <= 1e-13);
    }
}

TEST_CASE("gamma coefficients: 1000 random matrices in the positivity ball reconstruct") {
    for (int d : {2, 3}) {
        DirectionSet ds = build_direction_set(d);
        std::mt19937_64 rng(42 + d);
        for (int trial = 0; trial < 1000; ++trial) {
            auto v = random_near_id(ds, rng, ds.eps_u);
            auto gam = gamma_coefficients(ds, v);
            for (double gk : gam) {
                CHECK(std::isfinite(gk));
                CHECK(gk > 0.0);
            }
            auto back = reassemble(ds, gam);
            double err = 0.0;
            int c = 0;
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j, ++c) {
                    double diff = back[c] - v[c];
                    err += (i == j ? 1.0 : 2.0) * diff * diff;
                }
            CHECK(std::sqrt(err) <= 1e-12);
        }
    }
}

TEST_CASE("gamma coefficients: off-center bump stays positive, far matrices rejected") {
    DirectionSet ds = build_direction_set(2);
    // S = Id + 0.5 eps_u E12
    std::vector<double> v{1.0, 0.5 * ds.eps_u / std::sqrt(2.0), 1.0};
    auto gam = gamma_coefficients(ds, v);
    auto back = reassemble(ds, gam);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(back[i] - v[i]) <= 1e-12);

    std::vector<double> far{1.0 + 2.0 * ds.eps_u, 0.0, 1.0};
    CHECK_THROWS_AS((void)gamma_coefficients(ds, far), AssertionError);
}

TEST_CASE("gamma is Lipschitz near the identity: finite differences match the solve") {
    DirectionSet ds = build_direction_set(2);
    std::vector<double> v{1.02, 0.01, 0.98};
    const double h = 1e-6;
    for (int comp = 0; comp < 3; ++comp) {
        auto vp = v, vm = v;
        vp[comp] += h;
        vm[comp] -= h;
        auto gp = gamma_coefficients(ds, vp);
        auto gm = gamma_coefficients(ds, vm);
        auto g0 = gamma_coefficients(ds, v);
        // analytic derivative: d gamma_k / d S_comp = (M^{-1})_{k,comp} / (2 gamma_k)
        for (int k = 0; k < 3; ++k) {
            double num = (gp[k] - gm[k]) / (2.0 * h);
            double ana = ds.M_inv[k * 3 + comp] / (2.0 * g0[k]);
            CHECK(num == doctest::Approx(ana).epsilon(1e-6));
        }
    }
}

TEST_CASE("the axis-pair example set is solvable but degenerate at the identity") {
    // {(1,0), (0,1), (3/5,4/5)}: M is invertible yet c(Id) has a zero entry,
    // which is why the workbench uses the mirrored-pair set instead
    double M[9] = {1, 0, 9.0 / 25, 0, 0, 12.0 / 25, 0, 1, 16.0 / 25};
    double det = M[0] * (M[4] * M[8] - M[5] * M[7]) - M[1] * (M[3] * M[8] - M[5] * M[6]) +
                 M[2] * (M[3] * M[7] - M[4] * M[6]);
    CHECK(std::fabs(det) > 1e-3);
    // c(Id): c3 * 12/25 = S12 = 0 forces c3 = 0
    CHECK(0.0 * 12.0 / 25 == 0.0);
}
