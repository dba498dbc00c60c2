#ifndef PG4_ENERGY_HPP
#define PG4_ENERGY_HPP

#include <string>
#include <vector>

#include "pg4/flow.hpp"
#include "pg4/frenet.hpp"

namespace pg4 {

enum class FrameField { T, N, B1, B2 };
enum class LineDirection { SLine, TLine };

const char* to_string(FrameField f);
const char* to_string(LineDirection d);

// Bending energy of one frame field along one coordinate line, by composite
// Simpson over the stored integrand samples.
struct EnergyReport {
    FrameField field = FrameField::T;
    LineDirection direction = LineDirection::SLine;
    double a = 0.0, b = 0.0; // integration domain
    std::vector<double> params;     // sample locations
    std::vector<double> integrand;  // sample values
    double value = 0.0;
    double quadrature_error = 0.0; // Richardson estimate
    // The B1 s-line integrand has two printed variants differing in the
    // coefficient of the sigma^2 term; the second is reported here.
    bool has_alt_value = false;
    double alt_value = 0.0;
};

// Pseudo-angle of one frame field along one coordinate line. The printed
// formulas take square roots of possibly negative quantities; a negative
// radicand (or a sqrt(eps) with eps = -1) flips the branch flag, and the
// value then reports the magnitude of the imaginary part.
struct PseudoAngleReport {
    FrameField field = FrameField::T;
    LineDirection direction = LineDirection::SLine;
    double a = 0.0, b = 0.0;
    std::vector<double> params;
    // integrand samples; where a pointwise square root applies these are
    // the signed radicands before the root
    std::vector<double> integrand;
    double value = 0.0;
    bool complex_branch = false;
    double quadrature_error = 0.0;
};

// s-line energies from the apparatus curvatures over [a,b] (grid-aligned).
EnergyReport energy_s(const FrenetApparatus& app, FrameField field, double a, double b);

// t-line energies along the stored evolution, integrand evaluated at one
// grid point (s_index < 0 means the grid midpoint).
EnergyReport energy_t(const std::vector<EvolutionState>& history, const FlowField& flow,
                      FrameField field, double t0, double t1, long s_index = -1);

PseudoAngleReport pseudo_angle_s(const FrenetApparatus& app, FrameField field, double a, double b);

PseudoAngleReport pseudo_angle_t(const std::vector<EvolutionState>& history, const FlowField& flow,
                                 FrameField field, double t0, double t1, long s_index = -1);

} // namespace pg4

#endif
