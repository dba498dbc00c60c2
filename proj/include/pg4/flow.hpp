#ifndef PG4_FLOW_HPP
#define PG4_FLOW_HPP

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pg4/curve.hpp"
#include "pg4/frenet.hpp"
#include "pg4/numerics.hpp"

namespace pg4 {

// One velocity component as a function of arc length (all supported
// families are time-independent).
struct ConstantComponent {
    double c = 0.0;
};
struct PolyComponent {
    std::vector<double> coeffs; // ascending powers of s
};
struct SinComponent {
    double amp = 0.0, freq = 0.0, phase = 0.0;
};
struct TableComponent {
    std::vector<double> s;
    std::vector<double> value;
};

struct FlowComponent {
    std::variant<ConstantComponent, PolyComponent, SinComponent, TableComponent> f =
        ConstantComponent{};

    double eval(double s, int deriv = 0) const; // deriv in 0..2
    bool is_zero() const;

    static FlowComponent constant(double c) { return {ConstantComponent{c}}; }
    static FlowComponent poly(std::vector<double> c) { return {PolyComponent{std::move(c)}}; }
    static FlowComponent sinusoid(double amp, double freq, double phase) {
        return {SinComponent{amp, freq, phase}};
    }
};

// Velocity field dOmega/dt = f1 T + f2 N + f3 B1 + f4 B2.
struct FlowField {
    FlowComponent f1, f2, f3, f4;

    bool is_zero() const {
        return f1.is_zero() && f2.is_zero() && f3.is_zero() && f4.is_zero();
    }
    static FlowField zero() { return {}; }
    static FlowField tangential(double c) {
        FlowField f;
        f.f1 = FlowComponent::constant(c);
        return f;
    }
};

// Snapshot of the evolving curve.
struct EvolutionState {
    double t = 0.0;
    std::vector<PGVec4> positions;
    FrenetApparatus app;
    std::vector<double> speed; // |dOmega/du| per grid point
    double arc_length = 0.0;   // total polyline pg length
};

// d f1/du per grid point (v * df1/ds; v = 1 on arc-length grids).
std::vector<double> speed_rate(const EvolutionState& state, const FlowField& flow);

// The flow preserves arc length iff f1 is constant in s.
bool is_inextensible(const FlowField& flow, double s0, double s1, double tol);

// Coefficients of the time-direction frame relations at one point.
struct XiCoeffs {
    double xi1 = 0.0, xi2 = 0.0, xi3 = 0.0;
};
XiCoeffs xi_coeffs(double kappa, double tau, double sigma, int eps1, int eps2, int eps3,
                   const FlowField& flow, double s);
// Same, with the curvatures looked up at the grid point nearest to s.
XiCoeffs xi_coeffs(const FrenetApparatus& app, const FlowField& flow, double s);

struct SignTriple {
    int eps1 = 1, eps2 = 1, eps3 = -1;
};

struct ExtendedCoeffs {
    double xi1 = 0.0, xi2 = 0.0, xi3 = 0.0;
    double g1 = 0.0, g2 = 0.0, g3 = 0.0;
};

// Coefficient matrix of the time-direction frame relations, row for row:
//   [    0     xi1       xi2       xi3   ]
//   [ -e1*xi1   0      g1*e2     g2*e3   ]
//   [ -e2*xi2 -g1*e1     0       g3*e3   ]
//   [ -e3*xi3 -g2*e1  -g3*e2       0     ]
Mat4 extended_frenet_matrix(const ExtendedCoeffs& c, const SignTriple& signs);

// Method-of-lines evolution of the curve under the flow with classical RK4.
// Frames are recomputed from the current positions at every stage. Returns
// all states including the initial one (steps+1 entries).
std::vector<EvolutionState> evolve(const AdmissibleCurve& curve, const FlowField& flow,
                                   double dt, long steps);

// Frame rotation coefficients measured from stored states:
//   g1 = -<dB1/dt, N>,  g2 = <dB2/dt, N>,  g3 = <dB1/dt, B2>,
// time derivatives by 3-level central differences (one-sided 2nd order at
// the first and last states). Grids are indexed [time][space].
struct GammaGrids {
    std::vector<std::vector<double>> g1, g2, g3;
};
GammaGrids gamma_coeffs_numeric(const std::vector<EvolutionState>& history);

// One frame of the extended-relations integrator.
struct Frame4 {
    PGVec4 t, n, b1, b2;
};

struct FrameEvolution {
    std::vector<Frame4> frames;      // steps+1 frames in ambient coordinates
    double max_gram_deviation = 0.0; // worst drift of Y G Y^T from G
};

// Integrates d/dt [T;N;B1;B2] = M(t) [T;N;B1;B2] with RK4. The system is
// linear in the coefficient matrix Y relative to the start frame, and every
// assembled M is skew with respect to G = diag(1,e1,e2,e3), so Y G Y^T = G
// is an invariant; its drift is monitored each step (checked together with
// the algebraic skewness of M G) and exceeding gram_bound raises GramDrift.
FrameEvolution frame_evolve(const Frame4& start, const SignTriple& signs,
                            const std::function<ExtendedCoeffs(double)>& coeffs, double dt,
                            long steps, double gram_bound = 1e-6);

// pg-Gram deviation of an ambient-coordinates frame from diag(1,e1,e2,e3).
double frame_gram_deviation(const Frame4& fr, const SignTriple& signs);

// ----- compatibility residual suites ------------------------------------

struct ResidualEntry {
    std::string identity;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double h = 0.0;
    double dt = 0.0;
    long skipped = 0; // grid points excluded near a pole of the identity
};

using ResidualReport = std::vector<ResidualEntry>;

// All per-(s,t) fields the four systems need, precomputed from a stored
// evolution. Grids are [time][space].
struct FlowHistoryFields {
    long n = 0, m = 0;
    double h = 0.0, dt = 0.0;
    SignTriple signs;
    std::vector<std::vector<double>> kappa, tau, sigma;
    std::vector<std::vector<double>> dkappa_dt, dtau_dt, dsigma_dt;
    std::vector<std::vector<double>> xi1, xi2, xi3;
    std::vector<std::vector<double>> g1, g2, g3;
    std::vector<std::vector<double>> theta, phi, m_aux;
    // flow values and s-derivatives on the (time-independent) arc grid
    std::vector<double> f1, f2, f3, f4;
    std::vector<double> f1p, f2p, f3p, f4p;
    std::vector<double> f2pp, f3pp, f4pp;
    std::vector<double> s;
};

FlowHistoryFields build_history_fields(const std::vector<EvolutionState>& history,
                                       const FlowField& flow);

// Each suite returns one entry per identity, in a fixed order. The value
// grids behind the summaries are exposed for convergence studies.
struct ResidualSuite {
    ResidualReport report;
    std::vector<std::string> names;
    std::vector<std::vector<std::vector<double>>> fields; // per identity [time][space]
};

ResidualSuite residuals_tangent_system(const FlowHistoryFields& f);
ResidualSuite residuals_normal_system(const FlowHistoryFields& f);
ResidualSuite residuals_binormal1_system(const FlowHistoryFields& f);
ResidualSuite residuals_binormal2_system(const FlowHistoryFields& f);

// Convenience: all four suites on a stored evolution.
ResidualReport all_residuals(const std::vector<EvolutionState>& history, const FlowField& flow);

} // namespace pg4

#endif
