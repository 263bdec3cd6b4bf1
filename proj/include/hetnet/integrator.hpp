#pragma once

#include "hetnet/model.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hetnet {

enum class Coordinates { linear, log };
std::string to_string(Coordinates c);

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_max = 100.0;
    std::size_t max_steps = 5'000'000;
    Coordinates coords = Coordinates::log;
    /// Natural-log value at which a component is treated as extinct.
    double log_floor = -700.0;
    /// Record every n-th accepted step (the final state is always recorded).
    std::size_t record_stride = 1;
    /// 0 selects an automatic first step.
    double initial_step = 0.0;
    /// 0 means unbounded.
    double max_step = 0.0;
    /// In log mode, end the run the first time a surviving component reaches
    /// log_floor. Otherwise that component becomes an absorbing zero.
    bool stop_at_floor = true;

    void validate() const;
};

enum class Termination { completed, max_steps, step_underflow, floor_reached };
std::string to_string(Termination t);

struct Trajectory {
    std::vector<double> times;
    /// In the coordinates named by `coords` (log values in log mode).
    std::vector<State> states;
    Coordinates coords = Coordinates::log;
    double log_floor = -700.0;
    Params params;
    Termination termination = Termination::completed;
    /// Linear mode only: a step tried to produce a negative component.
    bool clamped = false;
    std::size_t steps = 0;
    std::size_t rejected = 0;

    /// True unless the run reached t_max or stopped at the log floor.
    bool truncated() const;
    State linear_state(std::size_t i) const;
    std::size_t size() const { return times.size(); }
};

/// Dormand–Prince 5(4) with PI step-size control. In log mode the unknowns
/// are u_j = log x_j and du_j/dt is the growth rate of species j; zero
/// initial components are held at log_floor as absorbing zeros.
Trajectory integrate(const Params& p, const State& x0, const IntegratorOptions& opts);

/// Componentwise log, clamped below at log_floor. Throws DomainError on a
/// zero or negative component.
State to_log(const State& x, double log_floor = -700.0);
/// Componentwise exp; values at or below log_floor map to exactly 0.
State to_linear(const State& u, double log_floor = -700.0);

/// xi_Q plus a displacement of length `radius` in a direction drawn from
/// a seeded normal distribution.
State default_initial_condition(const Params& p, std::uint64_t seed = 42, double radius = 1e-3);

/// CSV with header t,x1,x2,x3,x4,x5,mode.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace hetnet
