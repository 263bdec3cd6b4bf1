#include "hetnet/integrator.hpp"

#include "hetnet/error.hpp"
#include "hetnet/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace hetnet {

std::string to_string(Coordinates c) { return c == Coordinates::log ? "log" : "linear"; }

std::string to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::max_steps: return "max_steps";
        case Termination::step_underflow: return "step_underflow";
        case Termination::floor_reached: return "floor_reached";
    }
    return "?";
}

void IntegratorOptions::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (!(log_floor < 0.0)) throw std::invalid_argument("log_floor must be negative");
    if (record_stride == 0) throw std::invalid_argument("record_stride must be at least 1");
    if (max_steps == 0) throw std::invalid_argument("max_steps must be at least 1");
    if (initial_step < 0.0 || max_step < 0.0) throw std::invalid_argument("step sizes must be non-negative");
}

bool Trajectory::truncated() const {
    return termination == Termination::max_steps || termination == Termination::step_underflow;
}

State Trajectory::linear_state(std::size_t i) const {
    return coords == Coordinates::log ? to_linear(states[i], log_floor) : states[i];
}

State to_log(const State& x, double log_floor) {
    State u{};
    for (std::size_t i = 0; i < kSpecies; ++i) {
        if (!(x[i] > 0.0)) throw DomainError("state lies on a boundary subspace; log coordinates undefined");
        u[i] = std::max(std::log(x[i]), log_floor);
    }
    return u;
}

State to_linear(const State& u, double log_floor) {
    State x{};
    for (std::size_t i = 0; i < kSpecies; ++i) x[i] = u[i] <= log_floor ? 0.0 : std::exp(u[i]);
    return x;
}

State default_initial_condition(const Params& p, std::uint64_t seed, double radius) {
    const double q = xi_q_coordinate(p);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    State dir{};
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& d : dir) {
            d = normal(rng);
            n2 += d * d;
        }
    } while (n2 == 0.0);
    const double scale = radius / std::sqrt(n2);
    State x{};
    for (std::size_t i = 0; i < kSpecies; ++i) x[i] = q + scale * dir[i];
    return x;
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th-order and the embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct System {
    const Params& p;
    Coordinates coords;
    double floor;
    std::array<bool, kSpecies> dead{};

    State rhs(const State& y) const {
        if (coords == Coordinates::linear) return vector_field(p, y);
        State x{};
        for (std::size_t i = 0; i < kSpecies; ++i) x[i] = dead[i] ? 0.0 : std::exp(y[i]);
        State g = growth_rates(p, x);
        for (std::size_t i = 0; i < kSpecies; ++i)
            if (dead[i]) g[i] = 0.0;
        return g;
    }
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State r = y;
    for (std::size_t i = 0; i < kSpecies; ++i) {
        double acc = 0.0;
        for (const auto& [w, k] : terms) acc += w * (*k)[i];
        r[i] += h * acc;
    }
    return r;
}

double error_norm(const State& err, const State& y0, const State& y1, const System& sys, double atol,
                  double rtol) {
    State sq{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < kSpecies; ++i) {
        if (sys.dead[i]) continue;
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        sq[n++] = r * r;
    }
    // Order-independent sum keeps step sizes identical for rotated states.
    std::sort(sq.begin(), sq.begin() + static_cast<std::ptrdiff_t>(n));
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += sq[i];
    return n == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n));
}

double max_abs(const State& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

Trajectory integrate(const Params& p, const State& x0, const IntegratorOptions& opts) {
    p.validate();
    opts.validate();

    Trajectory traj;
    traj.coords = opts.coords;
    traj.log_floor = opts.log_floor;
    traj.params = p;

    System sys{p, opts.coords, opts.log_floor, {}};
    State y{};
    for (double v : x0)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("initial state must lie in the closed positive orthant");
    if (opts.coords == Coordinates::log) {
        // Zero components start as absorbing zeros at the floor.
        for (std::size_t i = 0; i < kSpecies; ++i) {
            y[i] = x0[i] > 0.0 ? std::max(std::log(x0[i]), opts.log_floor) : opts.log_floor;
            sys.dead[i] = y[i] <= opts.log_floor;
        }
    } else {
        y = x0;
    }

    double t = 0.0;
    traj.times.push_back(t);
    traj.states.push_back(y);

    State k1 = sys.rhs(y);
    const double hmax = opts.max_step > 0.0 ? opts.max_step : opts.t_max;

    double h = opts.initial_step;
    if (h <= 0.0) {
        // Hairer's starting step heuristic.
        const double d0 = max_abs(y), d1 = max_abs(k1);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        const State y1 = axpy(y, h0, {{1.0, &k1}});
        const State f1 = sys.rhs(y1);
        State diff{};
        for (std::size_t i = 0; i < kSpecies; ++i) diff[i] = f1[i] - k1[i];
        const double d2 = max_abs(diff) / h0;
        const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                     : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
        h = std::min(100.0 * h0, h1);
    }
    h = std::min({h, hmax, opts.t_max});

    constexpr double safety = 0.9, alpha = 0.17, beta = 0.04, fac_min = 0.2, fac_max = 10.0;
    double err_old = 1e-4;
    bool last_rejected = false;
    std::size_t accepted_since_record = 0;

    while (true) {
        if (t >= opts.t_max) {
            traj.termination = Termination::completed;
            break;
        }
        if (traj.steps >= opts.max_steps) {
            traj.termination = Termination::max_steps;
            break;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            traj.termination = Termination::step_underflow;
            break;
        }
        const bool final_step = t + h >= opts.t_max;
        if (final_step) h = opts.t_max - t;

        const State y2 = axpy(y, h, {{a21, &k1}});
        const State k2 = sys.rhs(y2);
        const State y3 = axpy(y, h, {{a31, &k1}, {a32, &k2}});
        const State k3 = sys.rhs(y3);
        const State y4 = axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        const State k4 = sys.rhs(y4);
        const State y5 = axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        const State k5 = sys.rhs(y5);
        const State y6 = axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        const State k6 = sys.rhs(y6);
        State ynew = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = sys.rhs(ynew);

        State err{};
        for (std::size_t i = 0; i < kSpecies; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        double en = error_norm(err, y, ynew, sys, opts.abs_tol, opts.rel_tol);
        if (!std::isfinite(en)) en = 1e10;

        if (en <= 1.0) {
            t = final_step ? opts.t_max : t + h;
            ++traj.steps;
            y = ynew;
            k1 = k7;

            bool hit_floor = false;
            if (opts.coords == Coordinates::log) {
                for (std::size_t i = 0; i < kSpecies; ++i) {
                    if (!sys.dead[i] && y[i] <= opts.log_floor) {
                        y[i] = opts.log_floor;
                        sys.dead[i] = true;
                        hit_floor = true;
                    }
                }
                if (hit_floor) k1 = sys.rhs(y);
            } else {
                bool any = false;
                for (double& v : y)
                    if (v < 0.0) {
                        v = 0.0;
                        any = true;
                    }
                if (any) {
                    traj.clamped = true;
                    k1 = sys.rhs(y);
                }
            }

            const bool stop = hit_floor && opts.stop_at_floor;
            if (++accepted_since_record >= opts.record_stride || t >= opts.t_max || stop) {
                traj.times.push_back(t);
                traj.states.push_back(y);
                accepted_since_record = 0;
            }
            if (stop) {
                traj.termination = Termination::floor_reached;
                break;
            }

            const double en_c = std::max(en, 1e-10);
            double fac = safety * std::pow(en_c, -alpha) * std::pow(err_old, beta);
            fac = std::clamp(fac, fac_min, fac_max);
            if (last_rejected) fac = std::min(fac, 1.0);
            h = std::min(h * fac, hmax);
            err_old = std::max(en, 1e-4);
            last_rejected = false;
        } else {
            ++traj.rejected;
            h *= std::max(fac_min, safety * std::pow(en, -alpha));
            last_rejected = true;
        }
    }

    if (traj.times.back() != t) {
        traj.times.push_back(t);
        traj.states.push_back(y);
    }
    return traj;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x1,x2,x3,x4,x5,mode\n";
    const std::string mode = to_string(traj.coords);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << fmt(traj.times[i]);
        for (double v : traj.states[i]) os << ',' << fmt(v);
        os << ',' << mode << '\n';
    }
}

}  // namespace hetnet
