#include "field.hpp"

#include <cmath>

namespace ciw {

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double VectorField::max_norm() const {
    const std::int64_t np = grid->points();
    double m = 0.0;
    for (std::int64_t p = 0; p < np; ++p) {
        double s = 0.0;
        for (const auto& comp : c) s += comp.v[p] * comp.v[p];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

int SymTensorField::index(int i, int j, int d) {
    if (i > j) std::swap(i, j);
    if (d == 2) {
        static const int t2[2][2] = {{0, 1}, {1, 2}};
        return t2[i][j];
    }
    static const int t3[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return t3[i][j];
}

double SymTensorField::frobenius_at(std::int64_t p) const {
    const int d = grid->dim();
    double s = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double x = c[index(i, j, d)].v[p];
            s += x * x;
        }
    return std::sqrt(s);
}

double SymTensorField::max_frobenius() const {
    const std::int64_t np = grid->points();
    double m = 0.0;
    for (std::int64_t p = 0; p < np; ++p) m = std::max(m, frobenius_at(p));
    return m;
}

// ---- scalar ops -------------------------------------------------------------

static void check_same(const GridPtr& a, const GridPtr& b) {
    if (a.get() != b.get() && (a->dim() != b->dim() || a->n() != b->n()))
        throw Error("field arithmetic: grid mismatch");
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    check_same(a.grid, b.grid);
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = a.v[p] + b.v[p];
    return r;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    check_same(a.grid, b.grid);
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = a.v[p] - b.v[p];
    return r;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    check_same(a.grid, b.grid);
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = a.v[p] * b.v[p];
    return r;
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = s * a.v[p];
    return r;
}

ScalarField operator+(const ScalarField& a, double s) {
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = a.v[p] + s;
    return r;
}

void axpy(double s, const ScalarField& x, ScalarField& y) {
    check_same(x.grid, y.grid);
    for (size_t p = 0; p < y.v.size(); ++p) y.v[p] += s * x.v[p];
}

ScalarField reciprocal(const ScalarField& a) {
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = 1.0 / a.v[p];
    return r;
}

ScalarField sqrt_field(const ScalarField& a) {
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = std::sqrt(a.v[p]);
    return r;
}

ScalarField apply_pointwise(const ScalarField& a, double (*fn)(double)) {
    ScalarField r(a.grid);
    for (size_t p = 0; p < r.v.size(); ++p) r.v[p] = fn(a.v[p]);
    return r;
}

// ---- vector ops -------------------------------------------------------------

VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    VectorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

VectorField operator*(double s, const VectorField& a) {
    VectorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = s * a.c[i];
    return r;
}

VectorField operator*(const ScalarField& s, const VectorField& a) {
    VectorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = s * a.c[i];
    return r;
}

void axpy(double s, const VectorField& x, VectorField& y) {
    for (size_t i = 0; i < y.c.size(); ++i) axpy(s, x.c[i], y.c[i]);
}

// ---- tensor ops -------------------------------------------------------------

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b) {
    SymTensorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

SymTensorField operator-(const SymTensorField& a, const SymTensorField& b) {
    SymTensorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

SymTensorField operator*(double s, const SymTensorField& a) {
    SymTensorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = s * a.c[i];
    return r;
}

SymTensorField operator*(const ScalarField& s, const SymTensorField& a) {
    SymTensorField r(a.grid);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = s * a.c[i];
    return r;
}

void axpy(double s, const SymTensorField& x, SymTensorField& y) {
    for (size_t i = 0; i < y.c.size(); ++i) axpy(s, x.c[i], y.c[i]);
}

SymTensorField outer_self(const VectorField& v) {
    const int d = v.grid->dim();
    SymTensorField r(v.grid);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) r.c[SymTensorField::index(i, j, d)] = v.c[i] * v.c[j];
    return r;
}

SymTensorField outer_sym2(const VectorField& v, const VectorField& w) {
    const int d = v.grid->dim();
    SymTensorField r(v.grid);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            r.c[SymTensorField::index(i, j, d)] = v.c[i] * w.c[j] + w.c[i] * v.c[j];
    return r;
}

SymTensorField dyad(const ScalarField& s, const std::array<double, 3>& k, int d) {
    SymTensorField r(s.grid);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) r.c[SymTensorField::index(i, j, d)] = (k[i] * k[j]) * s;
    return r;
}

ScalarField trace(const SymTensorField& a) {
    const int d = a.grid->dim();
    ScalarField r(a.grid);
    for (int i = 0; i < d; ++i) axpy(1.0, a.c[SymTensorField::index(i, i, d)], r);
    return r;
}

SymTensorField deviatoric(const SymTensorField& a) {
    const int d = a.grid->dim();
    SymTensorField r = a;
    ScalarField tr = trace(a);
    for (int i = 0; i < d; ++i) axpy(-1.0 / d, tr, r.c[SymTensorField::index(i, i, d)]);
    return r;
}

}  // namespace ciw
