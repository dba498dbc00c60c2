#ifndef PG4_IO_HPP
#define PG4_IO_HPP

#include <string>
#include <vector>

#include "pg4/curve.hpp"
#include "pg4/energy.hpp"
#include "pg4/flow.hpp"

namespace pg4 {

// Round-trip-exact decimal form of a double (17 significant digits).
std::string fmt17(double v);

struct CurveSpec {
    AdmissibleCurve curve;
    std::string family; // helix | polynomial | sampled
    double helix_a = 0.0, helix_b = 0.0, helix_k = 0.0;
};

// Curve definition JSON:
//   { "family": "helix"|"polynomial"|"sampled", "params": {...},
//     "domain": [s0,s1], "n": int }
// helix params: a,b,k. polynomial params: y,z,w coefficient arrays.
// sampled params: "rows": [[s,x,y,z,w],...] or "csv": path with header
// s,x,y,z,w. Overrides replace the file's domain/n when positive.
CurveSpec load_curve_json(const std::string& path, long n_override = 0, double dom0 = 0.0,
                          double dom1 = -1.0);
CurveSpec parse_curve_json(const std::string& text, const std::string& base_dir,
                           long n_override = 0, double dom0 = 0.0, double dom1 = -1.0);

// Flow definition JSON: { "f1": <component>, ... } with each component one of
//   {"const": c} | {"poly_s": [c0,...]} | {"sin": {"amp":a,"freq":w,"phase":p}}
//   | {"table": csv-path}
// Missing components default to zero.
FlowField load_flow_json(const std::string& path);
FlowField parse_flow_json(const std::string& text, const std::string& base_dir);

// Writers. CSV numbers use fmt17.
std::string apparatus_csv(const FrenetApparatus& app);
std::string apparatus_json(const FrenetApparatus& app);
std::string evolution_csv(const std::vector<EvolutionState>& states);
std::string residual_json(const ResidualReport& report);
std::string energy_json(const std::vector<EnergyReport>& energies,
                        const std::vector<PseudoAngleReport>& angles);
std::string energy_csv(const std::vector<EnergyReport>& energies,
                       const std::vector<PseudoAngleReport>& angles);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace pg4

#endif
