#include "grid.hpp"

#include <cmath>

namespace ciw {

static bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid::Grid(int d, int n, int nt, double T) : d_(d), n_(n), nt_(nt), T_(T) {
    if (d != 2 && d != 3) throw ConfigError(strformat("grid: d must be 2 or 3, got %d", d));
    if (n < 8 || !power_of_two(n))
        throw ConfigError(strformat("grid: n must be a power of two >= 8, got %d", n));
    if (nt < 2) throw ConfigError(strformat("grid: n_t must be >= 2, got %d", nt));
    if (!(T > 0)) throw ConfigError("grid: T must be positive");
    points_ = 1;
    for (int a = 0; a < d; ++a) points_ *= n;
    spec_ = (points_ / n) * (n / 2 + 1);
}

void Grid::phys_coords(std::int64_t idx, std::array<int, 3>& j) const {
    j = {0, 0, 0};
    for (int a = d_ - 1; a >= 0; --a) {
        j[a] = static_cast<int>(idx % n_);
        idx /= n_;
    }
}

void Grid::spec_freq(std::int64_t idx, std::array<int, 3>& xi) const {
    xi = {0, 0, 0};
    const int last = spec_last();
    xi[d_ - 1] = static_cast<int>(idx % last);
    idx /= last;
    for (int a = d_ - 2; a >= 0; --a) {
        int j = static_cast<int>(idx % n_);
        idx /= n_;
        xi[a] = j <= n_ / 2 ? j : j - n_;
    }
}

double Grid::spec_weight(std::int64_t idx) const {
    int jl = static_cast<int>(idx % spec_last());
    return (jl == 0 || jl == n_ / 2) ? 1.0 : 2.0;
}

bool Grid::is_nyquist(const std::array<int, 3>& xi) const {
    for (int a = 0; a < d_; ++a)
        if (xi[a] == n_ / 2 || xi[a] == -n_ / 2) return true;
    return false;
}

GridPtr make_grid(int d, int n, int nt, double T) {
    return std::make_shared<const Grid>(d, n, nt, T);
}

}  // namespace ciw
