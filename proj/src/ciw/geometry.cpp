#include "geometry.hpp"

#include <cmath>
#include <numeric>

namespace ciw {

namespace {

int sym_count(int d) { return d * (d + 1) / 2; }

// vec ordering matches SymTensorField: (00,01,11) / (00,01,02,11,12,22)
void dyad_vec(int d, const std::array<double, 3>& k, double* out) {
    int c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) out[c++] = k[i] * k[j];
}

// dense LU with partial pivoting, small fixed sizes
struct LU {
    int n = 0;
    std::vector<double> a;
    std::vector<int> piv;

    void factor(const std::vector<double>& m, int nn) {
        n = nn;
        a = m;
        piv.resize(n);
        std::iota(piv.begin(), piv.end(), 0);
        for (int col = 0; col < n; ++col) {
            int best = col;
            for (int r = col + 1; r < n; ++r)
                if (std::fabs(a[r * n + col]) > std::fabs(a[best * n + col])) best = r;
            if (std::fabs(a[best * n + col]) < 1e-14) throw Error("direction set: singular M");
            if (best != col) {
                for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[best * n + c]);
                std::swap(piv[col], piv[best]);
            }
            for (int r = col + 1; r < n; ++r) {
                double f = a[r * n + col] / a[col * n + col];
                a[r * n + col] = f;
                for (int c = col + 1; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            }
        }
    }

    void solve(const double* b, double* x) const {
        std::vector<double> y(n);
        for (int r = 0; r < n; ++r) {
            double s = b[piv[r]];
            for (int c = 0; c < r; ++c) s -= a[r * n + c] * y[c];
            y[r] = s;
        }
        for (int r = n - 1; r >= 0; --r) {
            double s = y[r];
            for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
            x[r] = s / a[r * n + r];
        }
    }
};

double one_norm(const std::vector<double>& m, int n) {
    double best = 0.0;
    for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += std::fabs(m[r * n + c]);
        best = std::max(best, s);
    }
    return best;
}

// exact integer orthonormality checks for the rational frames
void verify_frames(const std::vector<Direction>& dirs, int d) {
    for (const auto& dir : dirs) {
        long den2 = dir.den * dir.den;
        for (int r = 0; r < d; ++r)
            for (int s = r; s < d; ++s) {
                long dot = 0;
                for (int a = 0; a < d; ++a) dot += dir.frame_num[r][a] * dir.frame_num[s][a];
                long want = (r == s) ? den2 : 0;
                if (dot != want) throw Error("direction set: frame not orthonormal in integers");
            }
    }
}

// positivity radius: c(Id + r E) = c_id + r Minv vec(E) stays positive; the
// minimum over a deterministic sample of unit-Frobenius directions E, shrunk
// by 0.9
double positivity_radius(const DirectionSet& ds) {
    const int d = ds.dim;
    const int nc = sym_count(d);
    double rmin = 1e30;
    std::vector<double> vecE(nc), dc(nc);
    // deterministic direction sample: coordinate +/-, pair combinations, and a
    // low-discrepancy sweep
    std::vector<std::vector<double>> samples;
    for (int i = 0; i < nc; ++i)
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            std::vector<double> e(nc, 0.0);
            e[i] = sgn;
            samples.push_back(e);
        }
    for (int i = 0; i < nc; ++i)
        for (int j = i + 1; j < nc; ++j)
            for (int si = -1; si <= 1; si += 2)
                for (int sj = -1; sj <= 1; sj += 2) {
                    std::vector<double> e(nc, 0.0);
                    e[i] = si;
                    e[j] = sj;
                    samples.push_back(e);
                }
    unsigned long long state = 0x9e3779b97f4a7c15ull;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return double(state % 2000001) / 1000000.0 - 1.0;
    };
    for (int s = 0; s < 4096; ++s) {
        std::vector<double> e(nc);
        for (int i = 0; i < nc; ++i) e[i] = next();
        samples.push_back(e);
    }

    for (auto& e : samples) {
        // Frobenius normalization: off-diagonal packed entries appear twice
        double f2 = 0.0;
        int c = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j, ++c) f2 += (i == j ? 1.0 : 2.0) * e[c] * e[c];
        if (f2 <= 0.0) continue;
        double scale = 1.0 / std::sqrt(f2);
        for (auto& x : e) x *= scale;
        ds.solve_coeffs(e.data(), dc.data());
        for (int k = 0; k < nc; ++k) {
            if (dc[k] < 0.0) {
                double r = ds.c_id[k] / (-dc[k]);
                rmin = std::min(rmin, r);
            }
        }
    }
    return 0.9 * rmin;
}

}  // namespace

void DirectionSet::solve_coeffs(const double* vecS, double* c) const {
    const int nc = sym_count(dim);
    for (int i = 0; i < nc; ++i) {
        double s = 0.0;
        for (int j = 0; j < nc; ++j) s += M_inv[i * nc + j] * vecS[j];
        c[i] = s;
    }
}

DirectionSet build_direction_set(int d) {
    if (d != 2 && d != 3) throw Error("build_direction_set: d must be 2 or 3");
    DirectionSet ds;
    ds.dim = d;
    if (d == 2) {
        // (3,4)/5, (3,-4)/5 and e1; frames are the 90-degree rotations
        ds.dirs = {
            Direction{{{{3, 4, 0}, {-4, 3, 0}, {0, 0, 0}}}, 5},
            Direction{{{{3, -4, 0}, {4, 3, 0}, {0, 0, 0}}}, 5},
            Direction{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}}, 1},
        };
    } else {
        // (3,4,5)-type pairs in the three coordinate planes
        ds.dirs = {
            Direction{{{{3, 4, 0}, {-4, 3, 0}, {0, 0, 5}}}, 5},
            Direction{{{{3, -4, 0}, {4, 3, 0}, {0, 0, 5}}}, 5},
            Direction{{{{0, 3, 4}, {5, 0, 0}, {0, -4, 3}}}, 5},
            Direction{{{{0, 3, -4}, {5, 0, 0}, {0, 4, 3}}}, 5},
            Direction{{{{4, 0, 3}, {-3, 0, 4}, {0, 5, 0}}}, 5},
            Direction{{{{-4, 0, 3}, {3, 0, 4}, {0, 5, 0}}}, 5},
        };
    }
    verify_frames(ds.dirs, d);

    long N = 1;
    for (const auto& dir : ds.dirs) N = std::lcm(N, dir.den);
    ds.N_Lambda = N;

    const int nc = sym_count(d);
    if (static_cast<int>(ds.dirs.size()) != nc) throw Error("direction set: wrong cardinality");
    ds.M.assign(nc * nc, 0.0);
    std::vector<double> col(nc);
    for (int k = 0; k < nc; ++k) {
        dyad_vec(d, ds.dirs[k].unit(0), col.data());
        for (int r = 0; r < nc; ++r) ds.M[r * nc + k] = col[r];
    }

    LU lu;
    lu.factor(ds.M, nc);
    ds.M_inv.assign(nc * nc, 0.0);
    std::vector<double> e(nc), x(nc);
    for (int c = 0; c < nc; ++c) {
        std::fill(e.begin(), e.end(), 0.0);
        e[c] = 1.0;
        lu.solve(e.data(), x.data());
        for (int r = 0; r < nc; ++r) ds.M_inv[r * nc + c] = x[r];
    }
    ds.cond_M = one_norm(ds.M, nc) * one_norm(ds.M_inv, nc);

    // identity coefficients must be strictly positive
    std::vector<double> vid(nc, 0.0);
    int c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++c) vid[c] = (i == j) ? 1.0 : 0.0;
    ds.c_id.resize(nc);
    ds.solve_coeffs(vid.data(), ds.c_id.data());
    for (int k = 0; k < nc; ++k)
        if (!(ds.c_id[k] > 0.0))
            throw Error(strformat("direction set: c_%d(Id) = %g is not positive", k, ds.c_id[k]));

    ds.eps_u = positivity_radius(ds);
    if (!(ds.eps_u > 0.0)) throw Error("direction set: positivity radius is not positive");
    return ds;
}

double frob_dist_to_id(int d, const std::vector<double>& vecS) {
    double f2 = 0.0;
    int c = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++c) {
            double diff = vecS[c] - (i == j ? 1.0 : 0.0);
            f2 += (i == j ? 1.0 : 2.0) * diff * diff;
        }
    return std::sqrt(f2);
}

std::vector<double> gamma_coefficients(const DirectionSet& ds, const std::vector<double>& vecS) {
    const int nc = sym_count(ds.dim);
    if (static_cast<int>(vecS.size()) != nc) throw Error("gamma_coefficients: bad vec size");
    double dist = frob_dist_to_id(ds.dim, vecS);
    if (dist > ds.eps_u)
        throw AssertionError(strformat(
            "gamma_coefficients: ||S - Id||_F = %.6g exceeds eps_u = %.6g", dist, ds.eps_u));
    std::vector<double> c(nc), g(nc);
    ds.solve_coeffs(vecS.data(), c.data());
    for (int k = 0; k < nc; ++k) {
        if (!(c[k] > 0.0))
            throw AssertionError(
                strformat("gamma_coefficients: coefficient %d = %.6g not positive", k, c[k]));
        g[k] = std::sqrt(c[k]);
    }
    return g;
}

}  // namespace ciw
