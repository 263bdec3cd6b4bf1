#pragma once

#include "hetnet/itinerary.hpp"
#include "hetnet/model.hpp"
#include "hetnet/stability.hpp"
#include "hetnet/word.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hetnet {

struct GridSpec {
    double ca_min = 0.25, ca_max = 2.5;
    double cb_min = 0.25, cb_max = 2.5;
    std::size_t n_ca = 100, n_cb = 100;
    double e_a = 1.0, e_b = 0.8;
    std::vector<RootSequence> sequences;

    void validate() const;
    double ca(std::size_t i) const;
    double cb(std::size_t j) const;
};

struct GridRow {
    double ca = 0.0, cb = 0.0;
    StabilityReport report;
};

/// Rows ordered by sequence, then c_A, then c_B, independent of `threads`.
std::vector<GridRow> grid_sweep(const GridSpec& spec, unsigned threads = 1);

using Point = std::pair<double, double>;  ///< (c_A, c_B)

struct TraceOptions {
    double step = 0.005;
    double ca_min = 0.05, ca_max = 3.0;
    double cb_min = 0.05, cb_max = 6.0;
    std::size_t max_points = 20000;
    double s_tol = 1e-8;
    double e_a = 1.0, e_b = 0.8;
};

struct BoundaryPolyline {
    RootSequence sequence;
    std::vector<Point> points;
    std::vector<double> s_values;
    bool closed = false;
    std::string diagnostic;
};

/// Follow the zero set of the stability scalar through the domain box,
/// starting from the nearest sign change around `start`, in both directions.
BoundaryPolyline trace_boundary(const RootSequence& seq, Point start, const TraceOptions& opts);

/// Overall stability scalar of `seq` at (c_A, c_B) with fixed e_A, e_B.
double stability_scalar(const RootSequence& seq, double ca, double cb, double e_a = 1.0, double e_b = 0.8);

struct TongueFamily {
    /// Block letters from {T, D, Q}.
    std::string components = "TD";
    std::size_t max_length = 8;
};

/// Canonical, distinct sequences formed by concatenating blocks (T = AAB,
/// D = BB, Q = ABBB) with at most max_length letters, shortest first.
std::vector<RootSequence> enumerate_tongues(const TongueFamily& family);

struct Interval {
    double lo = 0.0, hi = 0.0;
};

/// Parameter intervals t in [t0, t1] where `seq` is fas at path(t), found on
/// n uniform samples and refined by bisection to `tol`.
std::vector<Interval> fas_intervals(const RootSequence& seq, const std::function<Point(double)>& path, double t0,
                                    double t1, std::size_t n, double e_a = 1.0, double e_b = 0.8,
                                    double tol = 1e-10);

enum class SimOutcome { root, irregular, equilibrium, sigma_tq, periodic, insufficient };
std::string to_string(SimOutcome o);

struct ClassifyOptions {
    std::size_t budget = 200;
    std::uint64_t seed = 42;
    double H = kDefaultProximity;
    double t_max = 50000.0;
    double max_step = 1.0;
    double rel_tol = 1e-10;

    void validate() const;
};

struct Classification {
    SimOutcome outcome = SimOutcome::insufficient;
    std::optional<RootSequence> root;
    std::size_t letters = 0;
    std::size_t defects = 0;
    ItineraryRecord itinerary;
    Word word;
    Termination termination = Termination::completed;
    std::string detail;
};

Classification classify_by_simulation(const Params& p, const ClassifyOptions& opts = {});

struct CrossValidation {
    Classification classification;
    std::optional<StabilityReport> report;
    std::vector<double> tail_ratios;
    double lambda_max = 0.0;
    double max_relative_deviation = 0.0;
    bool passed = false;
    std::string message;
};

/// Simulated root must be fas, and the last five circuits of period-spaced
/// epoch-duration ratios must lie within `ratio_tol` of lambda_max.
CrossValidation cross_validate(const Params& p, const ClassifyOptions& opts = {}, double ratio_tol = 0.05);

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows);
void write_boundary_csv(std::ostream& os, const BoundaryPolyline& line);
void write_classification_header(std::ostream& os);
void write_classification_row(std::ostream& os, const Params& p, const Classification& c);

}  // namespace hetnet
