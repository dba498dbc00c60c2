#include "pg4/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pg4 {

namespace {

double linf3(double a, double b, double c) {
    return std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
}

// If the vector to be normalized is genuinely tiny, the frame is simply
// degenerate; if it is sizable but its pg-norm vanished, it is null and no
// unit vector exists in its direction.
void throw_degenerate(const char* what, double mag, long idx) {
    if (mag > 1e-6)
        throw LightlikeDegeneracy(std::string(what) + " is lightlike at grid index " +
                                      std::to_string(idx),
                                  idx);
    throw FrenetDegenerate(std::string(what) + " degenerate (vanishing curvature) at grid index " +
                               std::to_string(idx),
                           idx);
}

} // namespace

FramePoint frenet_point(const CurveJet& jet, long idx) {
    if (std::fabs(jet.d1.x - 1.0) > kAdmissTol)
        throw NotAdmissible("frenet_point: |x'(s) - 1| = " +
                            std::to_string(std::fabs(jet.d1.x - 1.0)) + " at grid index " +
                            std::to_string(idx));

    FramePoint f;
    f.t = {1.0, jet.d1.y, jet.d1.z, jet.d1.w};

    const PGVec4 d2 = {0.0, jet.d2.y, jet.d2.z, jet.d2.w};
    const double q2 = iso_quad(d2, d2);
    f.kappa = std::sqrt(std::fabs(q2));
    if (f.kappa <= kKappaMin) throw_degenerate("kappa", linf3(d2.y, d2.z, d2.w), idx);
    f.eps1 = q2 >= 0.0 ? 1 : -1;
    f.n = d2 / f.kappa;

    // kappa' from kappa^2 = eps1 * Q(d2,d2); then N' = d3/kappa - d2*kappa'/kappa^2.
    const PGVec4 d3 = {0.0, jet.d3.y, jet.d3.z, jet.d3.w};
    const double kp = f.eps1 * iso_quad(d2, d3) / f.kappa;
    const PGVec4 np = d3 / f.kappa - d2 * (kp / (f.kappa * f.kappa));

    const double qn = iso_quad(np, np);
    f.tau = std::sqrt(std::fabs(qn));
    if (f.tau <= kTauMin) throw_degenerate("tau", linf3(np.y, np.z, np.w), idx);
    f.eps2 = qn >= 0.0 ? 1 : -1;
    f.b1 = np / f.tau;

    const PGVec4 raw = pg_cross(f.t, f.n, f.b1);
    const double det = det4(f.t, f.n, f.b1, raw);
    f.mu = det >= 0.0 ? 1 : -1;
    f.b2 = raw * static_cast<double>(f.mu);
    const double q_b2 = pg_dot(f.b2, f.b2);
    if (std::fabs(q_b2) < 1e-6)
        throw LightlikeDegeneracy("binormal2 is lightlike at grid index " + std::to_string(idx), idx);
    f.eps3 = q_b2 >= 0.0 ? 1 : -1;

    // sigma = <B1', B2> with B1' = N''/tau - N' tau'/tau^2.
    const PGVec4 d4 = {0.0, jet.d4.y, jet.d4.z, jet.d4.w};
    const double kpp = (f.eps1 * (iso_quad(d3, d3) + iso_quad(d2, d4)) - kp * kp) / f.kappa;
    const double k2 = f.kappa * f.kappa;
    const PGVec4 npp = d4 / f.kappa - d3 * (2.0 * kp / k2) +
                       d2 * (2.0 * kp * kp / (k2 * f.kappa) - kpp / k2);
    const double taup = f.eps2 * iso_quad(np, npp) / f.tau;
    const PGVec4 b1p = npp / f.tau - np * (taup / (f.tau * f.tau));
    f.sigma = pg_dot(b1p, f.b2);
    return f;
}

namespace {

FrenetApparatus assemble(const std::vector<double>& grid, const std::vector<CurveJet>& jets,
                         double h) {
    const long n = static_cast<long>(grid.size());
    FrenetApparatus app;
    app.s = grid;
    app.h = h;
    app.t.resize(grid.size());
    app.n.resize(grid.size());
    app.b1.resize(grid.size());
    app.b2.resize(grid.size());
    app.kappa.resize(grid.size());
    app.tau.resize(grid.size());
    app.sigma.resize(grid.size());

    // Fix the causal type at the midpoint first; a flip anywhere on the grid
    // means the frame theory's standing assumption is violated.
    const long mid = n / 2;
    const FramePoint ref = frenet_point(jets[static_cast<size_t>(mid)], mid);
    app.eps1 = ref.eps1;
    app.eps2 = ref.eps2;
    app.eps3 = ref.eps3;
    app.mu = ref.mu;

    for (long i = 0; i < n; ++i) {
        FramePoint f = frenet_point(jets[static_cast<size_t>(i)], i);
        if (f.eps1 != app.eps1 || f.eps2 != app.eps2 || f.eps3 != app.eps3 || f.mu != app.mu)
            throw FrenetDegenerate("causal sign flip along the curve at grid index " +
                                       std::to_string(i),
                                   i);
        const size_t k = static_cast<size_t>(i);
        app.t[k] = f.t;
        app.n[k] = f.n;
        app.b1[k] = f.b1;
        app.b2[k] = f.b2;
        app.kappa[k] = f.kappa;
        app.tau[k] = f.tau;
        app.sigma[k] = f.sigma;
    }
    return app;
}

} // namespace

FrenetApparatus frenet_apparatus(const AdmissibleCurve& curve) {
    if (curve.n < 2) throw InputError("frenet_apparatus: grid too small");
    return assemble(curve.grid(), curve_jets(curve), curve.h());
}

FrenetApparatus frenet_apparatus_from_positions(const std::vector<PGVec4>& positions, double h,
                                                int max_order) {
    GridJets gj = grid_jets(positions, h, max_order);
    FrenetApparatus app = assemble(gj.arc, gj.jets, h);
    if (max_order < 4) std::fill(app.sigma.begin(), app.sigma.end(), 0.0);
    return app;
}

FrenetApparatus frenet_apparatus_from_jets(const std::vector<double>& arc_grid,
                                           const std::vector<CurveJet>& jets, double h) {
    return assemble(arc_grid, jets, h);
}

namespace {

CurveJet jet_at(const AdmissibleCurve& curve, double s, long* idx_out = nullptr) {
    if (s < curve.s_min - 1e-12 || s > curve.s_max + 1e-12)
        throw DomainOutOfRange("s outside curve domain");
    if (curve.analytic()) {
        if (idx_out) *idx_out = -1;
        return std::get<AnalyticProvider>(curve.provider).jet(s);
    }
    const auto& sp = std::get<SampledProvider>(curve.provider);
    const double h = curve.h();
    long i = std::lround((s - curve.s_min) / h);
    i = std::clamp(i, 0L, curve.n - 1);
    if (idx_out) *idx_out = i;
    return grid_jets(sp.points, h).jets[static_cast<size_t>(i)];
}

} // namespace

PGVec4 tangent(const AdmissibleCurve& curve, double s) {
    long idx = -1;
    const CurveJet j = jet_at(curve, s, &idx);
    if (std::fabs(j.d1.x - 1.0) > kAdmissTol)
        throw NotAdmissible("tangent: curve is not arc-length parameterized at s=" +
                            std::to_string(s));
    return {1.0, j.d1.y, j.d1.z, j.d1.w};
}

double curvature_kappa(const AdmissibleCurve& curve, double s) {
    const CurveJet j = jet_at(curve, s);
    return std::sqrt(std::fabs(-j.d2.y * j.d2.y + j.d2.z * j.d2.z + j.d2.w * j.d2.w));
}

PGVec4 principal_normal(const AdmissibleCurve& curve, double s) {
    long idx = -1;
    return frenet_point(jet_at(curve, s, &idx), idx).n;
}

double torsion_tau(const AdmissibleCurve& curve, double s) {
    // tau itself is defined (possibly 0) whenever N is; only the frame
    // construction beyond it needs tau > 0.
    long idx = -1;
    const CurveJet jet = jet_at(curve, s, &idx);
    const PGVec4 d2 = {0.0, jet.d2.y, jet.d2.z, jet.d2.w};
    const double q2 = iso_quad(d2, d2);
    const double kappa = std::sqrt(std::fabs(q2));
    if (kappa <= kKappaMin)
        throw FrenetDegenerate("torsion_tau: kappa degenerate", idx);
    const int eps1 = q2 >= 0.0 ? 1 : -1;
    const PGVec4 d3 = {0.0, jet.d3.y, jet.d3.z, jet.d3.w};
    const double kp = eps1 * iso_quad(d2, d3) / kappa;
    const PGVec4 np = d3 / kappa - d2 * (kp / (kappa * kappa));
    return pg_norm(np);
}

PGVec4 binormal1(const AdmissibleCurve& curve, double s) {
    long idx = -1;
    return frenet_point(jet_at(curve, s, &idx), idx).b1;
}

PGVec4 binormal2(const AdmissibleCurve& curve, double s) {
    long idx = -1;
    return frenet_point(jet_at(curve, s, &idx), idx).b2;
}

double third_curvature_sigma(const AdmissibleCurve& curve, double s) {
    long idx = -1;
    return frenet_point(jet_at(curve, s, &idx), idx).sigma;
}

double FrenetOdeResiduals::max_row() const {
    return std::max({t_row, n_row, b1_row, b2_row});
}

FrenetOdeResiduals frenet_ode_residuals(const FrenetApparatus& app) {
    const long n = app.size();
    if (n < 3) throw GridTooSmall("frenet_ode_residuals: need >= 3 grid points");
    const double e1 = app.eps1, e2 = app.eps2, e3 = app.eps3;

    FrenetOdeResiduals r;
    auto comp = [](const PGVec4& v, int c) { return v[c]; };
    for (long i = 1; i + 1 < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        for (int c = 0; c < 4; ++c) {
            const double dt = (comp(app.t[k + 1], c) - comp(app.t[k - 1], c)) / (2.0 * app.h);
            const double dn = (comp(app.n[k + 1], c) - comp(app.n[k - 1], c)) / (2.0 * app.h);
            const double db1 = (comp(app.b1[k + 1], c) - comp(app.b1[k - 1], c)) / (2.0 * app.h);
            const double db2 = (comp(app.b2[k + 1], c) - comp(app.b2[k - 1], c)) / (2.0 * app.h);
            r.t_row = std::max(r.t_row, std::fabs(dt - e1 * app.kappa[k] * comp(app.n[k], c)));
            r.n_row = std::max(r.n_row, std::fabs(dn - e2 * app.tau[k] * comp(app.b1[k], c)));
            r.b1_row = std::max(r.b1_row,
                                std::fabs(db1 - (-e2 * app.tau[k] * comp(app.n[k], c) +
                                                 e3 * app.sigma[k] * comp(app.b2[k], c))));
            r.b2_row = std::max(r.b2_row,
                                std::fabs(db2 - (-e2 * app.sigma[k] * comp(app.b1[k], c))));
        }
    }
    return r;
}

double gram_deviation(const FrenetApparatus& app) {
    const double want[4] = {1.0, static_cast<double>(app.eps1), static_cast<double>(app.eps2),
                            static_cast<double>(app.eps3)};
    double dev = 0.0;
    for (long i = 0; i < app.size(); ++i) {
        const size_t k = static_cast<size_t>(i);
        const PGVec4 f[4] = {app.t[k], app.n[k], app.b1[k], app.b2[k]};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double g = pg_dot(f[a], f[b]);
                dev = std::max(dev, std::fabs(g - (a == b ? want[a] : 0.0)));
            }
    }
    return dev;
}

double det_deviation(const FrenetApparatus& app) {
    double dev = 0.0;
    for (long i = 0; i < app.size(); ++i) {
        const size_t k = static_cast<size_t>(i);
        dev = std::max(dev, std::fabs(det4(app.t[k], app.n[k], app.b1[k], app.b2[k]) - 1.0));
    }
    return dev;
}

} // namespace pg4
