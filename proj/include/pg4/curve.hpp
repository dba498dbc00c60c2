#ifndef PG4_CURVE_HPP
#define PG4_CURVE_HPP

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pg4/errors.hpp"
#include "pg4/pg_linalg.hpp"

namespace pg4 {

// Degeneracy thresholds for the frame construction.
inline constexpr double kKappaMin = 1e-9;
inline constexpr double kTauMin = 1e-9;
// Admissibility tolerance on |x'(s) - 1| for arc-length curves.
inline constexpr double kAdmissTol = 1e-6;

// Position and arc-length derivatives up to order 4 at one parameter value.
struct CurveJet {
    PGVec4 p, d1, d2, d3, d4;
};

using JetFn = std::function<CurveJet(double s)>;

// Curve supplied by closed-form position and derivatives.
struct AnalyticProvider {
    JetFn jet;
};

// Curve supplied as positions on a uniform arc-length grid.
struct SampledProvider {
    std::vector<double> s;      // uniform grid
    std::vector<PGVec4> points; // positions, first coordinate strictly increasing
};

// Admissible curve (x' != 0 throughout) with its evaluation domain and the
// grid resolution used for grid-based operations.
struct AdmissibleCurve {
    std::variant<AnalyticProvider, SampledProvider> provider;
    double s_min = 0.0;
    double s_max = 1.0;
    long n = 0;

    bool analytic() const { return std::holds_alternative<AnalyticProvider>(provider); }
    double h() const { return (s_max - s_min) / static_cast<double>(n - 1); }
    std::vector<double> grid() const;
};

// Circular helix (s, b*s, a*cos(k*s), a*sin(k*s)).
AdmissibleCurve make_helix(double a, double b, double k, double s0, double s1, long n);

// x = s with y,z,w polynomials in s (coefficients in ascending order).
AdmissibleCurve make_polynomial(const std::vector<double>& y,
                                const std::vector<double>& z,
                                const std::vector<double>& w,
                                double s0, double s1, long n);

// Wrap raw samples. The s-grid must be uniform (1e-12 relative). When the
// first coordinate is not an arc-length parameter (x != s + const), the
// samples are resampled onto a uniform grid in x, which is the arc length
// for admissible curves in this geometry.
AdmissibleCurve make_sampled(std::vector<double> s, std::vector<PGVec4> points);

// Sample an analytic curve's positions onto its grid (test/CLI helper).
std::vector<PGVec4> sample_positions(const AdmissibleCurve& curve);

// Jets for every grid point. Analytic providers evaluate the closed form;
// sampled providers differentiate the coordinate columns with 4th-order
// stencils and convert parameter derivatives to arc-length derivatives
// through the chain rule with s = x.
std::vector<CurveJet> curve_jets(const AdmissibleCurve& curve);

// Jets at grid points for raw positions on a (not necessarily arc-length)
// uniform parameter grid with spacing h. Also reports the parameter speed
// v_i = |dx/du| per point. Used by the evolution stepper, where the grid
// stays Lagrangian. boundary derivatives for the 3rd/4th order use wider
// shifted stencils to keep their error constants in check.
struct GridJets {
    std::vector<CurveJet> jets;
    std::vector<double> speed;
    std::vector<double> arc; // arc length from the first grid point: x_i - x_0
};
GridJets grid_jets(const std::vector<PGVec4>& positions, double h, int max_order = 4);

} // namespace pg4

#endif
