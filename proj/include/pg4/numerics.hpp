#ifndef PG4_NUMERICS_HPP
#define PG4_NUMERICS_HPP

#include <array>
#include <span>
#include <vector>

#include "pg4/errors.hpp"
#include "pg4/pg_linalg.hpp"

namespace pg4 {

// Finite-difference stencil for d^m/ds^m with a requested accuracy order.
// Weights are generated by solving the Vandermonde moment system
//   sum_i w_i * o_i^p = p! * [p == m],  p = 0..q-1,
// and validated against the moment conditions at construction. Weights are
// in offset units; divide the weighted sum by h^m.
struct Stencil {
    int derivative_order = 0;
    int accuracy = 0;
    std::vector<int> offsets;
    std::vector<double> weights;

    Stencil(int derivative_order, int accuracy, std::vector<int> offsets);

    // Weighted sum of samples[center + offset] for all offsets.
    double apply(std::span<const double> samples, long center) const;
};

// Centered stencil for interior points (width grows with m and accuracy).
Stencil central_stencil(int derivative_order, int accuracy);
// Stencil whose window [i+first_offset, i+first_offset+q-1] is shifted to
// fit inside the grid; fully one-sided at the boundary itself.
Stencil shifted_stencil(int derivative_order, int accuracy, int first_offset, int width);

// Differentiate uniformly spaced samples. Interior points use central
// stencils of the requested accuracy; the boundary bands use shifted
// (one-sided at the ends) stencils of `boundary_accuracy` (defaults to the
// interior accuracy).
std::vector<double> diff(std::span<const double> samples, double h,
                         int derivative_order, int accuracy,
                         int boundary_accuracy = -1);

// Composite Simpson; an odd interval count is handled by a trailing 3/8
// panel. Needs at least 3 samples.
double simpson(std::span<const double> samples, double h);

// Prefix integrals F_k = integral from s_0 to s_k by composite Simpson on
// each subrange (F_1 uses the parabola through the first three samples).
std::vector<double> simpson_prefix(std::span<const double> samples, double h);

// Richardson error estimate |S(h) - S(2h)|/15; returns 0 when the stride-2
// subsample is too short to integrate.
double simpson_error_estimate(std::span<const double> samples, double h);

// Determinant of the matrix with the given rows, by cofactor expansion.
double det4(const PGVec4& r0, const PGVec4& r1, const PGVec4& r2, const PGVec4& r3);

// Small dense 4x4 matrix used by the frame-evolution machinery.
struct Mat4 {
    std::array<std::array<double, 4>, 4> a{};

    static Mat4 identity();
    static Mat4 zero() { return Mat4{}; }

    double& operator()(int i, int j) { return a[i][j]; }
    double operator()(int i, int j) const { return a[i][j]; }

    Mat4 operator*(const Mat4& o) const;
    Mat4 operator+(const Mat4& o) const;
    Mat4 operator*(double c) const;
    double inf_norm() const;
    Mat4 transpose() const;
};

// Matrix exponential exp(M*t) by scaling and squaring with a fixed-order
// Taylor series. Throws NormTooLarge when ||M*t||_inf > 10.
Mat4 expm4(const Mat4& m, double t);

struct OrderFit {
    double order = 0.0;
    bool saturated = false; // all errors at the noise floor; slope meaningless
};

// Least-squares slope of log(err) against log(h) over refinement levels.
OrderFit observed_order(std::span<const std::pair<double, double>> h_err);

} // namespace pg4

#endif
