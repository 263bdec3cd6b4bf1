#pragma once

#include "hetnet/linalg.hpp"
#include "hetnet/model.hpp"
#include "hetnet/word.hpp"

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hetnet {

/// Coordinates (x_A, x_B, angle) on the incoming or outgoing section.
struct MapState {
    double x_a = 0.0;
    double x_b = 0.0;
    double theta = 0.0;
};

struct MapParams {
    double h = 0.1;
    double a3 = 1.0, a5 = 1.0, a_theta = 1.0;
    double b2 = 1.0, b3 = 1.0, b5 = 1.0;
    double c_a = 1.0, c_b = 1.0, c_theta = 1.0;
    double d_a = 1.0, d_b = 1.0, d_theta = 1.0;
    double theta_star = std::numbers::pi / 4.0;

    void validate() const;
};

/// Time T > 0 with x_A^2 e^{2 e_A T} + x_B^2 e^{2 e_B T} = h^2.
/// Throws NumericalError if both coordinates vanish.
double time_of_flight(double x_a, double x_b, const Params& p, double h);
/// Same equation with the coordinates given as logarithms (-inf allowed for one of them).
double time_of_flight_log(double log_xa, double log_xb, const Params& p, double h);

/// Linearised flow from the incoming to the outgoing section near an
/// equilibrium: (x_A, x_B, theta_c) -> (x_A^c, x_B^c, theta_e).
MapState local_map(const MapState& in, const Params& p, const MapParams& mp);

enum class Branch { type_a, type_b };

/// Lowest-order map from the outgoing section to the next incoming one.
/// type_a leads to xi_{j+1}, type_b to xi_{j+3}. Throws NumericalError when
/// theta_e is within 1e-12 of theta_star, and std::invalid_argument when the
/// branch contradicts the side of theta_star.
MapState global_map(Branch branch, const MapState& out, const MapParams& mp);

/// Log coordinates on the incoming section. The angle is theta after a type B
/// arrival and phi = pi/2 - theta after a type A arrival; `angle_tag` holds
/// that arrival letter.
struct LogMapState {
    double log_xa = 0.0;
    double log_xb = 0.0;
    double log_angle = 0.0;
    char angle_tag = 'B';
};

/// Monomial return map for previous transition `prev` and current `cur`,
/// with the angle read as phi when prev = A and theta when prev = B.
MapState phi(char prev, char cur, const MapState& s, const MapParams& mp, const Params& p);
LogMapState phi_log(char prev, char cur, const LogMapState& s, const MapParams& mp, const Params& p);

struct OrbitStep {
    std::size_t k = 0;
    char prev = 'A';
    char cur = 'A';
    LogMapState state;  ///< state after the step
};

struct Orbit {
    std::vector<OrbitStep> steps;
    Word emitted;
    bool escaped = false;
    std::string diagnostic;
};

/// Apply the letters of `seq` cyclically for n_circuits circuits, starting
/// from a state whose angle tag is the last letter. Stops with `escaped`
/// once any coordinate reaches h.
Orbit iterate_forced(const RootSequence& seq, const LogMapState& start, std::size_t n_circuits,
                     const MapParams& mp, const Params& p);

/// Start on the leading eigenvector of the first collection matrix, scaled so
/// that every intermediate state of the first circuit (with unit map
/// constants) has all log coordinates at or below -depth. Empty when that
/// eigenvector is not real with one sign throughout the circuit.
std::optional<LogMapState> eigen_start(const RootSequence& seq, const Params& p, double depth = 100.0);

/// Exact local map and branch choice by theta_e against theta_star, for
/// n_steps transitions. Escapes when x_A or x_B reaches h.
Orbit iterate_free(const LogMapState& start, std::size_t n_steps, const MapParams& mp, const Params& p);

/// Estimate theta_star by bisection on the initial angle of ODE runs inside
/// the invariant plane spanned by x1, x2, x4, leaving xi_1 at radius h.
double calibrate_theta_star(const Params& p, double h = 0.05, double tol = 1e-6);

/// CSV with header k,prev,cur,log_xA,log_xB,log_angle.
void write_csv(std::ostream& os, const Orbit& orbit);

}  // namespace hetnet
