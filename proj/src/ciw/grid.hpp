#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "util.hpp"

namespace ciw {

// Collocation grid on [-pi,pi)^d with n_t time samples over [0,T].
// Nodes are x_j = -pi + 2*pi*j/n per axis, t_i = i*T/(n_t-1).
class Grid {
public:
    Grid(int d, int n, int nt, double T);

    int dim() const { return d_; }
    int n() const { return n_; }
    int nt() const { return nt_; }
    double horizon() const { return T_; }
    double dt() const { return nt_ > 1 ? T_ / (nt_ - 1) : T_; }
    double time_at(int i) const { return i * dt(); }

    std::int64_t points() const { return points_; }      // n^d
    std::int64_t spec_size() const { return spec_; }     // n^(d-1) * (n/2+1)
    int spec_last() const { return n_ / 2 + 1; }

    double node(int j) const { return -M_PI + 2.0 * M_PI * j / n_; }

    // Physical index <-> coordinates (row-major, axis 0 slowest).
    void phys_coords(std::int64_t idx, std::array<int, 3>& j) const;

    // Spectral index -> signed frequency vector. Last axis is the half axis
    // (0..n/2); other axes wrap to (-n/2, n/2].
    void spec_freq(std::int64_t idx, std::array<int, 3>& xi) const;

    // Parseval weight of a stored half-spectrum mode (1 on the self-conjugate
    // planes xi_last in {0, n/2}, else 2).
    double spec_weight(std::int64_t idx) const;

    // True if any |xi_axis| equals n/2 (Nyquist). The spectral calculus
    // annihilates these modes; transforms keep them.
    bool is_nyquist(const std::array<int, 3>& xi) const;

private:
    int d_, n_, nt_;
    double T_;
    std::int64_t points_, spec_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int d, int n, int nt, double T);

}  // namespace ciw
