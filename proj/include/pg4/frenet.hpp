#ifndef PG4_FRENET_HPP
#define PG4_FRENET_HPP

#include <vector>

#include "pg4/curve.hpp"
#include "pg4/numerics.hpp"
#include "pg4/pg_linalg.hpp"

namespace pg4 {

// Frame, curvatures and sign data at one parameter value.
struct FramePoint {
    PGVec4 t, n, b1, b2;
    double kappa = 0.0;
    double tau = 0.0;
    double sigma = 0.0;
    int eps1 = 0, eps2 = 0, eps3 = 0;
    int mu = 0;
};

// Full per-grid apparatus with the globally fixed sign triple.
struct FrenetApparatus {
    std::vector<double> s;
    std::vector<PGVec4> t, n, b1, b2;
    std::vector<double> kappa, tau, sigma;
    int eps1 = 0, eps2 = 0, eps3 = 0;
    int mu = 0;
    double h = 0.0;

    long size() const { return static_cast<long>(s.size()); }
};

// Frame construction from one jet. grid_index only labels error messages.
FramePoint frenet_point(const CurveJet& jet, long grid_index = -1);

// Apparatus over the whole grid. The sign triple and mu are fixed at the
// grid midpoint and must not flip anywhere on the grid.
FrenetApparatus frenet_apparatus(const AdmissibleCurve& curve);

// Apparatus from raw positions on a uniform Lagrangian grid (used while a
// curve evolves, where the parameter need not be arc length). max_order 3
// skips sigma, which needs 4th derivatives.
FrenetApparatus frenet_apparatus_from_positions(const std::vector<PGVec4>& positions,
                                                double h, int max_order = 4);

// Apparatus from precomputed jets on the given arc-length grid.
FrenetApparatus frenet_apparatus_from_jets(const std::vector<double>& arc_grid,
                                           const std::vector<CurveJet>& jets, double h);

// Pointwise operations. Sampled curves snap s to the nearest grid point.
PGVec4 tangent(const AdmissibleCurve& curve, double s);
double curvature_kappa(const AdmissibleCurve& curve, double s);
PGVec4 principal_normal(const AdmissibleCurve& curve, double s);
double torsion_tau(const AdmissibleCurve& curve, double s);
PGVec4 binormal1(const AdmissibleCurve& curve, double s);
PGVec4 binormal2(const AdmissibleCurve& curve, double s);
double third_curvature_sigma(const AdmissibleCurve& curve, double s);

// Max-abs residuals of the four frame-derivative rows, with the left side
// taken by 2nd-order central differences over the grid interior:
//   dT/ds - e1*kappa*N,  dN/ds - e2*tau*B1,
//   dB1/ds + e2*tau*N - e3*sigma*B2,  dB2/ds + e2*sigma*B1.
struct FrenetOdeResiduals {
    double t_row = 0.0, n_row = 0.0, b1_row = 0.0, b2_row = 0.0;
    double max_row() const;
};
FrenetOdeResiduals frenet_ode_residuals(const FrenetApparatus& app);

// Max deviation of the pg-Gram matrix of (T,N,B1,B2) from
// diag(1, eps1, eps2, eps3) over the grid.
double gram_deviation(const FrenetApparatus& app);

// Max deviation of det[T,N,B1,B2] from +1 over the grid.
double det_deviation(const FrenetApparatus& app);

} // namespace pg4

#endif
