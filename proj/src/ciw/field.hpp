#pragma once

#include <array>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"

namespace ciw {

// Real scalar field stored as collocation values. The spectral view is
// produced on demand by spectral.hpp (truncated half-spectrum coefficients).
struct ScalarField {
    GridPtr grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), v(grid->points(), fill) {}

    double max_abs() const;
    double mean() const;  // grid average = xi=0 coefficient
};

struct VectorField {
    GridPtr grid;
    std::vector<ScalarField> c;  // d components

    VectorField() = default;
    explicit VectorField(GridPtr g) : grid(g), c(g->dim(), ScalarField(g)) {}

    double max_norm() const;  // sup of Euclidean norm over nodes
};

// Symmetric d x d tensor field, components stored for i <= j in row order:
// d=2: (00,01,11); d=3: (00,01,02,11,12,22).
struct SymTensorField {
    GridPtr grid;
    std::vector<ScalarField> c;

    SymTensorField() = default;
    explicit SymTensorField(GridPtr g)
        : grid(g), c(g->dim() * (g->dim() + 1) / 2, ScalarField(g)) {}

    static int index(int i, int j, int d);
    int comps() const { return static_cast<int>(c.size()); }

    double max_frobenius() const;  // sup of Frobenius norm over nodes
    double frobenius_at(std::int64_t p) const;
};

template <class F>
struct TimeField {
    GridPtr grid;
    std::vector<F> s;  // n_t samples at t_i = i*T/(n_t-1)

    TimeField() = default;
    explicit TimeField(GridPtr g) : grid(g), s(g->nt(), F(g)) {}
};

using ScalarTimeField = TimeField<ScalarField>;
using VectorTimeField = TimeField<VectorField>;
using SymTensorTimeField = TimeField<SymTensorField>;

// ---- pointwise arithmetic -------------------------------------------------

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField operator+(const ScalarField& a, double s);
void axpy(double s, const ScalarField& x, ScalarField& y);  // y += s*x
ScalarField reciprocal(const ScalarField& a);
ScalarField sqrt_field(const ScalarField& a);
ScalarField apply_pointwise(const ScalarField& a, double (*fn)(double));

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
VectorField operator*(const ScalarField& s, const VectorField& a);
void axpy(double s, const VectorField& x, VectorField& y);

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator-(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator*(double s, const SymTensorField& a);
SymTensorField operator*(const ScalarField& s, const SymTensorField& a);
void axpy(double s, const SymTensorField& x, SymTensorField& y);

// v (x) v
SymTensorField outer_self(const VectorField& v);
// v (x) w + w (x) v
SymTensorField outer_sym2(const VectorField& v, const VectorField& w);
// s * (k (x) k) for a constant direction k
SymTensorField dyad(const ScalarField& s, const std::array<double, 3>& k, int d);
// A - (tr A / d) Id
SymTensorField deviatoric(const SymTensorField& a);
ScalarField trace(const SymTensorField& a);

}  // namespace ciw
