#include "pg4/curve.hpp"

#include <algorithm>
#include <cmath>

#include "pg4/numerics.hpp"

namespace pg4 {

std::vector<double> AdmissibleCurve::grid() const {
    std::vector<double> g(static_cast<size_t>(n));
    const double step = h();
    for (long i = 0; i < n; ++i) g[static_cast<size_t>(i)] = s_min + step * static_cast<double>(i);
    return g;
}

AdmissibleCurve make_helix(double a, double b, double k, double s0, double s1, long n) {
    JetFn jet = [a, b, k](double s) {
        CurveJet j;
        const double c = std::cos(k * s), sn = std::sin(k * s);
        j.p = {s, b * s, a * c, a * sn};
        j.d1 = {1.0, b, -a * k * sn, a * k * c};
        j.d2 = {0.0, 0.0, -a * k * k * c, -a * k * k * sn};
        j.d3 = {0.0, 0.0, a * k * k * k * sn, -a * k * k * k * c};
        j.d4 = {0.0, 0.0, a * k * k * k * k * c, a * k * k * k * k * sn};
        return j;
    };
    return {AnalyticProvider{std::move(jet)}, s0, s1, n};
}

namespace {

// Horner evaluation of the deriv-th derivative of a polynomial given in
// ascending coefficient order.
double poly_eval(const std::vector<double>& c, double s, int deriv) {
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) {
        const long p = static_cast<long>(i);
        if (p < deriv) break;
        double coef = c[i];
        for (int d = 0; d < deriv; ++d) coef *= static_cast<double>(p - d);
        v = v * s + coef;
    }
    return v;
}

} // namespace

AdmissibleCurve make_polynomial(const std::vector<double>& y,
                                const std::vector<double>& z,
                                const std::vector<double>& w,
                                double s0, double s1, long n) {
    JetFn jet = [y, z, w](double s) {
        CurveJet j;
        j.p = {s, poly_eval(y, s, 0), poly_eval(z, s, 0), poly_eval(w, s, 0)};
        j.d1 = {1.0, poly_eval(y, s, 1), poly_eval(z, s, 1), poly_eval(w, s, 1)};
        j.d2 = {0.0, poly_eval(y, s, 2), poly_eval(z, s, 2), poly_eval(w, s, 2)};
        j.d3 = {0.0, poly_eval(y, s, 3), poly_eval(z, s, 3), poly_eval(w, s, 3)};
        j.d4 = {0.0, poly_eval(y, s, 4), poly_eval(z, s, 4), poly_eval(w, s, 4)};
        return j;
    };
    return {AnalyticProvider{std::move(jet)}, s0, s1, n};
}

namespace {

// 6-point Lagrange interpolation of tabulated (xs, vals) at x.
double lagrange6(const std::vector<double>& xs, const std::vector<double>& vals, double x) {
    const long n = static_cast<long>(xs.size());
    long lo = static_cast<long>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    lo = std::clamp(lo - 2, 0L, n - 6);
    double sum = 0.0;
    for (long i = lo; i < lo + 6; ++i) {
        double li = 1.0;
        for (long j = lo; j < lo + 6; ++j) {
            if (j == i) continue;
            li *= (x - xs[static_cast<size_t>(j)]) /
                  (xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)]);
        }
        sum += li * vals[static_cast<size_t>(i)];
    }
    return sum;
}

} // namespace

AdmissibleCurve make_sampled(std::vector<double> s, std::vector<PGVec4> points) {
    const long n = static_cast<long>(s.size());
    if (n < 9 || points.size() != s.size())
        throw InputError("make_sampled: need >= 9 matching samples");

    const double span = s.back() - s.front();
    if (span <= 0.0) throw InputError("make_sampled: s grid must increase");
    const double h = span / static_cast<double>(n - 1);
    for (long i = 0; i + 1 < n; ++i) {
        const double d = s[static_cast<size_t>(i + 1)] - s[static_cast<size_t>(i)];
        if (std::fabs(d - h) > 1e-12 * std::max(1.0, std::fabs(span)))
            throw InputError("make_sampled: s grid is not uniform");
    }
    for (long i = 0; i + 1 < n; ++i)
        if (points[static_cast<size_t>(i + 1)].x <= points[static_cast<size_t>(i)].x)
            throw NotAdmissible("make_sampled: first coordinate must strictly increase");

    // Arc length equals the first coordinate here; if x is not affine in the
    // supplied parameter, resample y,z,w on a uniform grid in x.
    bool arc_length = true;
    for (long i = 0; i < n; ++i) {
        const double expect = points[0].x + (s[static_cast<size_t>(i)] - s[0]);
        if (std::fabs(points[static_cast<size_t>(i)].x - expect) > 1e-9 * std::max(1.0, span)) {
            arc_length = false;
            break;
        }
    }
    if (!arc_length) {
        std::vector<double> xs(points.size()), ys(points.size()), zs(points.size()), ws(points.size());
        for (size_t i = 0; i < points.size(); ++i) {
            xs[i] = points[i].x;
            ys[i] = points[i].y;
            zs[i] = points[i].z;
            ws[i] = points[i].w;
        }
        const double x0 = xs.front(), x1 = xs.back();
        const double hx = (x1 - x0) / static_cast<double>(n - 1);
        std::vector<double> s2(static_cast<size_t>(n));
        std::vector<PGVec4> p2(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i) {
            const double x = (i == n - 1) ? x1 : x0 + hx * static_cast<double>(i);
            s2[static_cast<size_t>(i)] = x - x0;
            p2[static_cast<size_t>(i)] = {x, lagrange6(xs, ys, x), lagrange6(xs, zs, x),
                                          lagrange6(xs, ws, x)};
        }
        s = std::move(s2);
        points = std::move(p2);
    }

    AdmissibleCurve c;
    c.s_min = s.front();
    c.s_max = s.back();
    c.n = n;
    c.provider = SampledProvider{std::move(s), std::move(points)};
    return c;
}

std::vector<PGVec4> sample_positions(const AdmissibleCurve& curve) {
    if (const auto* sp = std::get_if<SampledProvider>(&curve.provider)) return sp->points;
    const auto& ap = std::get<AnalyticProvider>(curve.provider);
    std::vector<PGVec4> out;
    out.reserve(static_cast<size_t>(curve.n));
    for (double s : curve.grid()) out.push_back(ap.jet(s).p);
    return out;
}

GridJets grid_jets(const std::vector<PGVec4>& positions, double h, int max_order) {
    const long n = static_cast<long>(positions.size());
    std::vector<double> col[4];
    for (int c = 0; c < 4; ++c) col[c].resize(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        col[0][static_cast<size_t>(i)] = positions[static_cast<size_t>(i)].x;
        col[1][static_cast<size_t>(i)] = positions[static_cast<size_t>(i)].y;
        col[2][static_cast<size_t>(i)] = positions[static_cast<size_t>(i)].z;
        col[3][static_cast<size_t>(i)] = positions[static_cast<size_t>(i)].w;
    }

    // Parameter derivatives. The one-sided error constants of the high
    // derivative orders are large, so the boundary bands get two extra
    // orders of accuracy there.
    std::vector<double> du[4][4];
    for (int c = 0; c < 4; ++c)
        for (int m = 1; m <= max_order; ++m)
            du[c][m - 1] = diff(col[c], h, m, 4, m >= 3 ? 6 : 4);

    GridJets out;
    out.jets.resize(static_cast<size_t>(n));
    out.speed.resize(static_cast<size_t>(n));
    out.arc.resize(static_cast<size_t>(n));

    for (long li = 0; li < n; ++li) {
        const size_t i = static_cast<size_t>(li);
        const double xu = du[0][0][i];
        if (std::fabs(xu) < 1e-9)
            throw NotAdmissible("grid_jets: x'(u) vanished at grid index " + std::to_string(li));
        out.speed[i] = std::fabs(xu);
        out.arc[i] = col[0][i] - col[0][0];

        CurveJet& j = out.jets[i];
        j.p = positions[i];
        const double xuu = du[0][1][i];
        const double xuuu = max_order >= 3 ? du[0][2][i] : 0.0;
        const double xuuuu = max_order >= 4 ? du[0][3][i] : 0.0;
        double g1[4], g2[4], g3[4], g4[4];
        for (int c = 0; c < 4; ++c) {
            // chain rule with s = x: invert g_u = G' x_u, etc.
            const double gu = du[c][0][i];
            const double guu = du[c][1][i];
            g1[c] = gu / xu;
            g2[c] = (guu - g1[c] * xuu) / (xu * xu);
            if (max_order >= 3) {
                const double guuu = du[c][2][i];
                g3[c] = (guuu - 3.0 * g2[c] * xu * xuu - g1[c] * xuuu) / (xu * xu * xu);
            } else {
                g3[c] = 0.0;
            }
            if (max_order >= 4) {
                const double guuuu = du[c][3][i];
                g4[c] = (guuuu - 6.0 * g3[c] * xu * xu * xuu -
                         g2[c] * (4.0 * xu * xuuu + 3.0 * xuu * xuu) - g1[c] * xuuuu) /
                        (xu * xu * xu * xu);
            } else {
                g4[c] = 0.0;
            }
        }
        j.d1 = {g1[0], g1[1], g1[2], g1[3]};
        j.d2 = {g2[0], g2[1], g2[2], g2[3]};
        j.d3 = {g3[0], g3[1], g3[2], g3[3]};
        j.d4 = {g4[0], g4[1], g4[2], g4[3]};
    }
    return out;
}

std::vector<CurveJet> curve_jets(const AdmissibleCurve& curve) {
    if (curve.analytic()) {
        const auto& ap = std::get<AnalyticProvider>(curve.provider);
        std::vector<CurveJet> jets;
        jets.reserve(static_cast<size_t>(curve.n));
        for (double s : curve.grid()) jets.push_back(ap.jet(s));
        return jets;
    }
    const auto& sp = std::get<SampledProvider>(curve.provider);
    return grid_jets(sp.points, curve.h()).jets;
}

} // namespace pg4
