#include "pg4/energy.hpp"

#include <cmath>

namespace pg4 {

const char* to_string(FrameField f) {
    switch (f) {
        case FrameField::T: return "T";
        case FrameField::N: return "N";
        case FrameField::B1: return "B1";
        default: return "B2";
    }
}

const char* to_string(LineDirection d) {
    return d == LineDirection::SLine ? "s-line" : "t-line";
}

namespace {

// Map [a,b] to grid index range; endpoints must sit on grid points.
std::pair<long, long> domain_indices(const std::vector<double>& s, double h, double a, double b) {
    if (b <= a) throw DomainOutOfRange("energy: empty domain");
    const double tol = 1e-9 * std::max(1.0, std::fabs(s.back() - s.front()));
    if (a < s.front() - tol || b > s.back() + tol)
        throw DomainOutOfRange("energy: domain outside the apparatus grid");
    const long ia = std::lround((a - s.front()) / h);
    const long ib = std::lround((b - s.front()) / h);
    if (ia < 0 || ib >= static_cast<long>(s.size()) || ib - ia < 2 ||
        std::fabs(s[static_cast<size_t>(ia)] - a) > tol ||
        std::fabs(s[static_cast<size_t>(ib)] - b) > tol)
        throw DomainOutOfRange("energy: domain endpoints must lie on the grid");
    return {ia, ib};
}

} // namespace

EnergyReport energy_s(const FrenetApparatus& app, FrameField field, double a, double b) {
    const auto [ia, ib] = domain_indices(app.s, app.h, a, b);
    const double e1 = app.eps1, e2 = app.eps2, e3 = app.eps3;

    EnergyReport rep;
    rep.field = field;
    rep.direction = LineDirection::SLine;
    rep.a = a;
    rep.b = b;
    std::vector<double> alt;
    for (long i = ia; i <= ib; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double kap = app.kappa[k], tau = app.tau[k], sig = app.sigma[k];
        double v = 0.0;
        switch (field) {
            case FrameField::T: v = 0.5 * (1.0 + e1 * kap * kap); break;
            case FrameField::N: v = 0.5 * (e1 + e2 * tau * tau); break;
            case FrameField::B1:
                // this integrand circulates in two variants that differ
                // in the sign weight on the sigma^2 term; both are reported
                v = 0.5 * (e2 + e1 * tau * tau + e1 * sig * sig);
                alt.push_back(0.5 * (e2 + e1 * tau * tau + e3 * sig * sig));
                break;
            case FrameField::B2: v = 0.5 * (e3 + e3 * sig * sig); break;
        }
        rep.params.push_back(app.s[k]);
        rep.integrand.push_back(v);
    }
    rep.value = simpson(rep.integrand, app.h);
    rep.quadrature_error = simpson_error_estimate(rep.integrand, app.h);
    if (!alt.empty()) {
        rep.has_alt_value = true;
        rep.alt_value = simpson(alt, app.h);
    }
    return rep;
}

namespace {

struct TLineSamples {
    std::vector<double> t;
    std::vector<double> value;
    double dt = 0.0;
};

enum class BracketUse { Energy, Angle };

// Bracketed sum of the t-line formulas for one field at one grid point,
// sampled over [t0,t1]; shared by energies and pseudo-angles. The two uses
// differ only for T: the energy bracket is xi1^2 + e2 xi2^2 + e3 xi3^2
// (the e1 sits outside the integral), while the pseudo-angle radicand is
// e1 xi1^2 + e2 xi2^2 + e3 xi3^2.
TLineSamples t_line_bracket(const std::vector<EvolutionState>& history, const FlowField& flow,
                            FrameField field, double t0, double t1, long s_index,
                            BracketUse use) {
    const FlowHistoryFields f = build_history_fields(history, flow);
    if (s_index < 0) s_index = f.n / 2;
    if (s_index >= f.n) throw DomainOutOfRange("t-line: s_index outside grid");
    const size_t k = static_cast<size_t>(s_index);
    const double e1 = f.signs.eps1, e2 = f.signs.eps2, e3 = f.signs.eps3;

    const double tol = 1e-9 * std::max(1.0, history.back().t);
    if (t0 < history.front().t - tol || t1 > history.back().t + tol || t1 <= t0)
        throw DomainOutOfRange("t-line: [t0,t1] outside the stored history");
    const long j0 = std::lround((t0 - history.front().t) / f.dt);
    const long j1 = std::lround((t1 - history.front().t) / f.dt);
    if (j1 - j0 < 2) throw InsufficientHistory("t-line: need >= 3 time levels in [t0,t1]");

    TLineSamples out;
    out.dt = f.dt;
    for (long j = j0; j <= j1; ++j) {
        const size_t jj = static_cast<size_t>(j);
        double v = 0.0;
        switch (field) {
            case FrameField::T:
                v = (use == BracketUse::Angle ? e1 : 1.0) * f.xi1[jj][k] * f.xi1[jj][k] +
                    e2 * f.xi2[jj][k] * f.xi2[jj][k] + e3 * f.xi3[jj][k] * f.xi3[jj][k];
                break;
            case FrameField::N:
                v = f.phi[jj][k] * f.phi[jj][k] + e2 * f.g1[jj][k] * f.g1[jj][k] +
                    e3 * f.g2[jj][k] * f.g2[jj][k];
                break;
            case FrameField::B1:
                v = f.theta[jj][k] * f.theta[jj][k] + e1 * f.g1[jj][k] * f.g1[jj][k] +
                    e3 * f.g3[jj][k] * f.g3[jj][k];
                break;
            case FrameField::B2:
                v = f.m_aux[jj][k] * f.m_aux[jj][k] + e1 * f.g2[jj][k] * f.g2[jj][k] +
                    e2 * f.g3[jj][k] * f.g3[jj][k];
                break;
        }
        out.t.push_back(history[jj].t);
        out.value.push_back(v);
    }
    return out;
}

double leading_eps(FrameField field, const SignTriple& sg) {
    switch (field) {
        case FrameField::T: return 1.0;
        case FrameField::N: return sg.eps1;
        case FrameField::B1: return sg.eps2;
        default: return sg.eps3;
    }
}

} // namespace

EnergyReport energy_t(const std::vector<EvolutionState>& history, const FlowField& flow,
                      FrameField field, double t0, double t1, long s_index) {
    TLineSamples samples = t_line_bracket(history, flow, field, t0, t1, s_index, BracketUse::Energy);
    const SignTriple sg{history.front().app.eps1, history.front().app.eps2,
                        history.front().app.eps3};
    const double lead = leading_eps(field, sg);
    const double e1 = sg.eps1;

    EnergyReport rep;
    rep.field = field;
    rep.direction = LineDirection::TLine;
    rep.a = t0;
    rep.b = t1;
    rep.params = samples.t;
    for (size_t i = 0; i < samples.value.size(); ++i) {
        // T gets the whole bracket scaled by eps1 as printed; the other
        // fields carry their eps inside the bracket already
        const double bracket = (field == FrameField::T) ? e1 * samples.value[i] : samples.value[i];
        rep.integrand.push_back(0.5 * (lead + bracket));
    }
    rep.value = simpson(rep.integrand, samples.dt);
    rep.quadrature_error = simpson_error_estimate(rep.integrand, samples.dt);
    return rep;
}

namespace {

// Split sqrt integration of a signed radicand: the real part integrates
// sqrt(r) where r >= 0, the imaginary part sqrt(-r) where r < 0.
struct SplitSqrt {
    std::vector<double> re, im;
};

SplitSqrt split_sqrt(const std::vector<double>& radicand) {
    SplitSqrt s;
    s.re.reserve(radicand.size());
    s.im.reserve(radicand.size());
    for (double r : radicand) {
        if (r >= 0.0) {
            s.re.push_back(std::sqrt(r));
            s.im.push_back(0.0);
        } else {
            s.re.push_back(0.0);
            s.im.push_back(std::sqrt(-r));
        }
    }
    return s;
}

void finish_angle(PseudoAngleReport& rep, const std::vector<double>& radicand, double step,
                  double scale, bool eps_negative) {
    rep.integrand = radicand;
    const SplitSqrt s = split_sqrt(radicand);
    const double re = scale * simpson(s.re, step);
    const double im = scale * simpson(s.im, step);
    const bool has_im = std::fabs(im) > 0.0;
    if (eps_negative) {
        // sqrt(eps) with eps = -1 turns the whole integral imaginary
        rep.complex_branch = true;
        rep.value = std::fabs(re) + std::fabs(im);
    } else if (has_im) {
        rep.complex_branch = true;
        rep.value = std::fabs(im);
    } else {
        rep.complex_branch = false;
        rep.value = re;
    }
    rep.quadrature_error =
        std::fabs(scale) * (simpson_error_estimate(s.re, step) + simpson_error_estimate(s.im, step));
}

} // namespace

PseudoAngleReport pseudo_angle_s(const FrenetApparatus& app, FrameField field, double a, double b) {
    const auto [ia, ib] = domain_indices(app.s, app.h, a, b);
    const double e1 = app.eps1, e2 = app.eps2, e3 = app.eps3;

    PseudoAngleReport rep;
    rep.field = field;
    rep.direction = LineDirection::SLine;
    rep.a = a;
    rep.b = b;

    std::vector<double> radicand;
    bool eps_negative = false;
    for (long i = ia; i <= ib; ++i) {
        const size_t k = static_cast<size_t>(i);
        rep.params.push_back(app.s[k]);
        switch (field) {
            case FrameField::T: // (1/2) sqrt(e1) * integral of kappa
                radicand.push_back(app.kappa[k] * app.kappa[k]);
                eps_negative = e1 < 0.0;
                break;
            case FrameField::N: // (1/2) sqrt(e2) * integral of tau
                radicand.push_back(app.tau[k] * app.tau[k]);
                eps_negative = e2 < 0.0;
                break;
            case FrameField::B1: // (1/2) integral of sqrt(e1 tau^2 + e3 sigma^2)
                radicand.push_back(e1 * app.tau[k] * app.tau[k] + e3 * app.sigma[k] * app.sigma[k]);
                break;
            case FrameField::B2: // (1/2) sqrt(e2) * integral of sigma
                radicand.push_back(app.sigma[k]);
                break;
        }
    }

    if (field == FrameField::B2) {
        // plain integral of sigma (signed), scaled by sqrt(e2)
        rep.integrand = radicand;
        const double v = 0.5 * simpson(radicand, app.h);
        rep.complex_branch = e2 < 0.0;
        rep.value = rep.complex_branch ? std::fabs(v) : v;
        rep.quadrature_error = 0.5 * simpson_error_estimate(radicand, app.h);
        return rep;
    }
    if (field == FrameField::T || field == FrameField::N) {
        // integrands kappa, tau are norms: integrate them directly and let
        // sqrt(eps) decide the branch
        std::vector<double> vals;
        for (double r : radicand) vals.push_back(std::sqrt(r));
        rep.integrand = vals;
        const double v = 0.5 * simpson(vals, app.h);
        rep.complex_branch = eps_negative;
        rep.value = eps_negative ? std::fabs(v) : v;
        rep.quadrature_error = 0.5 * simpson_error_estimate(vals, app.h);
        return rep;
    }
    finish_angle(rep, radicand, app.h, 0.5, false);
    return rep;
}

PseudoAngleReport pseudo_angle_t(const std::vector<EvolutionState>& history, const FlowField& flow,
                                 FrameField field, double t0, double t1, long s_index) {
    TLineSamples samples = t_line_bracket(history, flow, field, t0, t1, s_index, BracketUse::Angle);
    PseudoAngleReport rep;
    rep.field = field;
    rep.direction = LineDirection::TLine;
    rep.a = t0;
    rep.b = t1;
    rep.params = samples.t;
    finish_angle(rep, samples.value, samples.dt, 0.5, false);
    return rep;
}

} // namespace pg4
