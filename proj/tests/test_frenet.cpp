#include <doctest.h>

#include <cmath>

#include "pg4/frenet.hpp"

using namespace pg4;

namespace {

constexpr double kTwoPi = 6.283185307179586;

void check_vec(const PGVec4& got, const PGVec4& want, double tol) {
    CHECK(got.x == doctest::Approx(want.x).epsilon(tol).scale(1.0));
    CHECK(got.y == doctest::Approx(want.y).epsilon(tol).scale(1.0));
    CHECK(got.z == doctest::Approx(want.z).epsilon(tol).scale(1.0));
    CHECK(got.w == doctest::Approx(want.w).epsilon(tol).scale(1.0));
}

} // namespace

TEST_CASE("helix frames and curvatures, analytic provider") {
    struct Case {
        double a, b, k;
    };
    for (const Case c : {Case{1, 1, 1}, Case{1, 1, 2}, Case{2, 0, 0.5}}) {
        const AdmissibleCurve curve = make_helix(c.a, c.b, c.k, 0.0, kTwoPi, 512);
        for (double s : {0.3, 1.7, 5.1}) {
            check_vec(tangent(curve, s),
                      {1.0, c.b, -c.a * c.k * std::sin(c.k * s), c.a * c.k * std::cos(c.k * s)},
                      1e-12);
            CHECK(curvature_kappa(curve, s) == doctest::Approx(c.a * c.k * c.k).epsilon(1e-12));
            check_vec(principal_normal(curve, s),
                      {0.0, 0.0, -std::cos(c.k * s), -std::sin(c.k * s)}, 1e-12);
            CHECK(torsion_tau(curve, s) == doctest::Approx(c.k).epsilon(1e-12));
            check_vec(binormal1(curve, s), {0.0, 0.0, std::sin(c.k * s), -std::cos(c.k * s)},
                      1e-12);
            check_vec(binormal2(curve, s), {0.0, 1.0, 0.0, 0.0}, 1e-12);
            CHECK(third_curvature_sigma(curve, s) == doctest::Approx(0.0).scale(1.0));
        }

        const FrenetApparatus app = frenet_apparatus(curve);
        CHECK(app.eps1 == 1);
        CHECK(app.eps2 == 1);
        CHECK(app.eps3 == -1);
        CHECK(app.mu == 1);
        for (long i = 0; i < app.size(); ++i) {
            const size_t k = static_cast<size_t>(i);
            CHECK(std::fabs(app.kappa[k] - c.a * c.k * c.k) < 1e-12 * std::max(1.0, c.a * c.k * c.k));
            CHECK(std::fabs(app.tau[k] - c.k) < 1e-12 * std::max(1.0, c.k));
            CHECK(std::fabs(app.sigma[k]) < 1e-12);
        }
    }
}

TEST_CASE("sign system is consistent with the parity rule") {
    const AdmissibleCurve helix = make_helix(1, 1, 2, 0.0, kTwoPi, 128);
    const FrenetApparatus app = frenet_apparatus(helix);
    const int expected_eps3 = (app.eps1 == -1 || app.eps2 == -1) ? 1 : -1;
    CHECK(app.eps3 == expected_eps3);
    CHECK(det_deviation(app) < 1e-8);
    CHECK(gram_deviation(app) < 1e-8);
    // exact first components by construction
    for (long i = 0; i < app.size(); ++i) {
        const size_t k = static_cast<size_t>(i);
        CHECK(app.t[k].x == 1.0);
        CHECK(app.n[k].x == 0.0);
        CHECK(app.b1[k].x == 0.0);
        CHECK(app.b2[k].x == 0.0);
    }
}

TEST_CASE("straight line is Frenet-degenerate") {
    const AdmissibleCurve line = make_polynomial({0.0, 0.5}, {0.0, 2.0}, {0.0, 3.0}, 0.0, 1.0, 64);
    check_vec(tangent(line, 0.5), {1.0, 0.5, 2.0, 3.0}, 1e-14);
    CHECK(curvature_kappa(line, 0.5) == 0.0);
    CHECK_THROWS_AS(principal_normal(line, 0.5), FrenetDegenerate);
    CHECK_THROWS_AS(frenet_apparatus(line), FrenetDegenerate);
}

TEST_CASE("curve with lightlike principal direction is refused") {
    // y'' = z'' makes the second-derivative vector null but nonzero
    const AdmissibleCurve bad = make_polynomial({0.0, 0.0, 0.5}, {0.0, 0.0, 0.5}, {}, 0.0, 1.0, 64);
    CHECK_THROWS_AS(principal_normal(bad, 0.5), LightlikeDegeneracy);
}

TEST_CASE("quartic test curve against hand-derived values at s=2") {
    // (s, s^2/2, s^3/6, s^4/24); worked out by cofactor expansion and the
    // chain-rule formulas before implementation
    const AdmissibleCurve q =
        make_polynomial({0, 0, 0.5}, {0, 0, 0, 1.0 / 6.0}, {0, 0, 0, 0, 1.0 / 24.0}, 1.5, 2.1, 64);
    const double root7 = std::sqrt(7.0);
    CHECK(curvature_kappa(q, 2.0) == doctest::Approx(root7).epsilon(1e-12));
    CHECK(torsion_tau(q, 2.0) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(third_curvature_sigma(q, 2.0) == doctest::Approx(root7).epsilon(1e-12));
    check_vec(principal_normal(q, 2.0), {0, 1 / root7, 2 / root7, 2 / root7}, 1e-12);
    check_vec(binormal1(q, 2.0), {0, -6 / root7, -5 / root7, 2 / root7}, 1e-12);
    check_vec(binormal2(q, 2.0), {0, -2, -2, 1}, 1e-12);

    const FrenetApparatus app = frenet_apparatus(q);
    CHECK(app.eps1 == 1);
    CHECK(app.eps2 == -1);
    CHECK(app.eps3 == 1);
    CHECK(app.mu == -1);
    CHECK(gram_deviation(app) < 1e-8);
    CHECK(det_deviation(app) < 1e-8);
}

TEST_CASE("generic curve: closed-form frame algebra vs external differentiation") {
    // all three curvatures nonzero and varying; the implementation's
    // derivative chain is checked against 5-point differences of the frame
    // fields themselves, which share only the frame evaluation
    const AdmissibleCurve c = make_polynomial({0, 0, -0.15, 0.02, 0.01},
                                              {0, 0, -0.5, 0.12, 0.015},
                                              {0, 0, 1.0, 1.0 / 6.0, 0.01}, 1.6, 2.4, 64);
    const double delta = 1e-2;
    const double w4[5] = {1.0, -8.0, 0.0, 8.0, -1.0}; // 4th-order d/ds
    for (double s : {1.9, 2.0, 2.1}) {
        PGVec4 db1{0, 0, 0, 0}, dn{0, 0, 0, 0};
        for (int o = -2; o <= 2; ++o) {
            const double w = w4[o + 2] / (12.0 * delta);
            if (w == 0.0) continue;
            db1 = db1 + binormal1(c, s + o * delta) * w;
            dn = dn + principal_normal(c, s + o * delta) * w;
        }
        const double sigma_fd = pg_dot(db1, binormal2(c, s));
        const double tau_fd = pg_norm(dn);
        CHECK(third_curvature_sigma(c, s) == doctest::Approx(sigma_fd).epsilon(1e-7));
        CHECK(torsion_tau(c, s) == doctest::Approx(tau_fd).epsilon(1e-7));
        // sanity: the curvatures are genuinely nonzero here
        CHECK(curvature_kappa(c, s) > 0.1);
        CHECK(std::fabs(third_curvature_sigma(c, s)) > 0.01);
    }
}

TEST_CASE("apparatus refuses a causal sign flip along the grid") {
    // the quartic's N changes causal type near s = 0.96
    const AdmissibleCurve q =
        make_polynomial({0, 0, 0.5}, {0, 0, 0, 1.0 / 6.0}, {0, 0, 0, 0, 1.0 / 24.0}, 0.2, 2.5, 128);
    CHECK_THROWS_AS(frenet_apparatus(q), Error);
}

TEST_CASE("sampled provider reproduces analytic values at 4th order") {
    const double a = 1.0, b = 1.0, k = 2.0;
    const AdmissibleCurve analytic = make_helix(a, b, k, 0.0, kTwoPi, 512);
    AdmissibleCurve sampled;
    {
        std::vector<double> s = analytic.grid();
        sampled = make_sampled(s, sample_positions(analytic));
    }
    const FrenetApparatus ref = frenet_apparatus(analytic);
    const FrenetApparatus app = frenet_apparatus(sampled);
    CHECK(app.eps1 == ref.eps1);
    CHECK(app.eps2 == ref.eps2);
    CHECK(app.eps3 == ref.eps3);
    CHECK(gram_deviation(app) < 1e-6);
    CHECK(det_deviation(app) < 1e-6);

    double kerr = 0.0, terr = 0.0, serr = 0.0;
    for (long i = 0; i < app.size(); ++i) {
        const size_t j = static_cast<size_t>(i);
        kerr = std::max(kerr, std::fabs(app.kappa[j] - a * k * k));
        terr = std::max(terr, std::fabs(app.tau[j] - k));
        serr = std::max(serr, std::fabs(app.sigma[j]));
    }
    CHECK(kerr < 1e-5);
    CHECK(terr < 1e-5);
    CHECK(serr < 1e-5);

    // interior tangent at 4th order in h
    const double s_mid = app.s[256];
    const PGVec4 t_smp = tangent(sampled, s_mid);
    const PGVec4 t_ref = tangent(analytic, s_mid);
    CHECK(std::fabs(t_smp.z - t_ref.z) < 1e-7);
    CHECK(std::fabs(t_smp.w - t_ref.w) < 1e-7);
}

TEST_CASE("non-arc-length samples are reparameterized through x") {
    // positions of the helix at x-values that are nonlinear in the supplied
    // parameter; loading must resample to a uniform grid in x
    const double a = 1.0, b = 0.5, k = 1.0;
    const AdmissibleCurve helix = make_helix(a, b, k, 0.0, 4.0, 301);
    const auto& jet = std::get<AnalyticProvider>(helix.provider).jet;
    const long n = 301;
    std::vector<double> s(static_cast<size_t>(n));
    std::vector<PGVec4> pts(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / (n - 1);
        const double x = 4.0 * (u + 0.15 * u * u) / 1.15;
        s[static_cast<size_t>(i)] = u;
        pts[static_cast<size_t>(i)] = jet(x).p;
    }
    const AdmissibleCurve resampled = make_sampled(std::move(s), std::move(pts));
    const FrenetApparatus app = frenet_apparatus(resampled);
    for (long i = 0; i < app.size(); ++i)
        CHECK(std::fabs(app.kappa[static_cast<size_t>(i)] - a * k * k) < 2e-4);
}

TEST_CASE("frame-derivative rows converge at 2nd order") {
    const double a = 1.0, b = 1.0, k = 1.0;
    std::vector<std::pair<double, double>> errs;
    for (long n : {128L, 256L, 512L}) {
        const AdmissibleCurve curve = make_helix(a, b, k, 0.0, kTwoPi, n);
        const FrenetApparatus app = frenet_apparatus(curve);
        const FrenetOdeResiduals r = frenet_ode_residuals(app);
        errs.emplace_back(app.h, r.max_row());
        // sigma = 0 for the helix, so the B2 row balances to the central
        // difference of a constant frame
        CHECK(r.b2_row < 1e-10);
    }
    const OrderFit fit = observed_order(errs);
    CHECK(!fit.saturated);
    CHECK(fit.order >= 1.9);
}

TEST_CASE("pointwise ops on a sampled curve snap to grid points") {
    const AdmissibleCurve analytic = make_helix(1, 1, 1, 0.0, kTwoPi, 128);
    const AdmissibleCurve sampled = make_sampled(analytic.grid(), sample_positions(analytic));
    CHECK(curvature_kappa(sampled, sampled.s_min + 3.0001 * sampled.h()) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(curvature_kappa(sampled, sampled.s_max + 1.0), DomainOutOfRange);
}
