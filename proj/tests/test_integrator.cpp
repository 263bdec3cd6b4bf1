#include "support.hpp"

#include "hetnet/error.hpp"
#include "hetnet/integrator.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <sstream>

using namespace hetnet;

namespace {

State end_state(const Trajectory& t) { return t.linear_state(t.size() - 1); }

double max_diff(const State& a, const State& b) {
    double d = 0;
    for (std::size_t i = 0; i < 5; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Fixed step h: tolerances so loose that every step is accepted at max_step.
State fixed_step(const Params& p, const State& x0, double h, double t_end) {
    IntegratorOptions o;
    o.coords = Coordinates::linear;
    o.rel_tol = 1e6;
    o.abs_tol = 1e6;
    o.initial_step = h;
    o.max_step = h;
    o.t_max = t_end;
    const Trajectory t = integrate(p, x0, o);
    CHECK(t.rejected == 0);
    return end_state(t);
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("fixed-step error shrinks at fifth order") {
    const Params p{1.2, 1.0, 1.0, 0.8};
    const State x0{0.3, 0.1, 0.2, 0.25, 0.15};
    IntegratorOptions ref;
    ref.coords = Coordinates::linear;
    ref.rel_tol = 1e-13;
    ref.abs_tol = 1e-15;
    ref.t_max = 4.0;
    const State exact = end_state(integrate(p, x0, ref));
    const double e1 = max_diff(fixed_step(p, x0, 0.4, 4.0), exact);
    const double e2 = max_diff(fixed_step(p, x0, 0.2, 4.0), exact);
    const double e3 = max_diff(fixed_step(p, x0, 0.1, 4.0), exact);
    const double order1 = std::log2(e1 / e2), order2 = std::log2(e2 / e3);
    CHECK(order1 > 4.5);
    CHECK(order2 > 4.5);
    CHECK(order2 < 6.0);
}

TEST_CASE("interior equilibrium is a fixed point in both coordinate systems") {
    const Params p{0.8, 0.55, 1.0, 0.8};  // stable, so rounding does not grow
    const State q = xi_q(p).coords;
    for (auto c : {Coordinates::linear, Coordinates::log}) {
        IntegratorOptions o;
        o.coords = c;
        o.t_max = 50;
        const Trajectory t = integrate(p, q, o);
        CHECK(t.termination == Termination::completed);
        CHECK(t.times.back() == 50.0);
        CHECK(max_diff(end_state(t), q) < 1e-10);  // rounding-level drift over ~10^3 steps
    }
}

TEST_CASE("log and linear runs agree on a short interval") {
    const Params p{0.8, 1.8, 1.0, 0.8};
    const State x0{0.2, 0.3, 0.1, 0.05, 0.4};
    IntegratorOptions o;
    o.t_max = 20;
    o.coords = Coordinates::linear;
    const State a = end_state(integrate(p, x0, o));
    o.coords = Coordinates::log;
    const State b = end_state(integrate(p, x0, o));
    CHECK(max_diff(a, b) < 1e-8);
}

TEST_CASE("coordinate conversion") {
    const State x{1.0, 0.5, 1e-310, 2.0, 0.25};
    const State u = to_log(x);
    CHECK(u[0] == 0.0);
    CHECK(u[2] == -700.0);
    CHECK(u[1] == doctest::Approx(std::log(0.5)));
    const State back = to_linear(u);
    CHECK(back[2] == 0.0);
    CHECK(back[3] == doctest::Approx(2.0));
    CHECK_THROWS_AS(to_log({1, 0, 1, 1, 1}), DomainError);
    CHECK_THROWS_AS(to_log({1, -1, 1, 1, 1}), DomainError);
}

TEST_CASE("invalid inputs are rejected") {
    const Params p;
    IntegratorOptions o;
    CHECK_THROWS_AS(integrate(p, {-0.1, 0.2, 0.2, 0.2, 0.2}, o), std::invalid_argument);
    CHECK_THROWS_AS(integrate(p, {std::nan(""), 0.2, 0.2, 0.2, 0.2}, o), std::invalid_argument);
    o.rel_tol = 0;
    CHECK_THROWS_AS(integrate(p, {0.2, 0.2, 0.2, 0.2, 0.2}, o), std::invalid_argument);
    CHECK_THROWS_AS(integrate({0, 1, 1, 1}, {0.2, 0.2, 0.2, 0.2, 0.2}, IntegratorOptions{}), std::invalid_argument);
}

TEST_CASE("positivity, boundedness and equivariance along random trajectories") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Params p = testing::random_params(rng, 0.3, 2.5);
        const State x0{u(rng), u(rng), u(rng), u(rng), u(rng)};
        IntegratorOptions o;
        o.t_max = 200;
        o.max_step = 1.0;
        o.stop_at_floor = false;
        const Trajectory a = integrate(p, x0, o);
        const Trajectory b = integrate(p, rotate(x0), o);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            const State x = a.linear_state(i);
            for (double v : x) CHECK(v >= 0.0);
            if (a.times[i] > 50) CHECK(total(x) < 5.0);
            CHECK(max_diff(rotate(x), b.linear_state(i)) < 1e-10);
        }
    }
}

TEST_CASE("the plane x4 = x5 = 0 is invariant") {
    const Params p{0.8, 0.9, 1.0, 0.8};
    for (auto c : {Coordinates::linear, Coordinates::log}) {
        IntegratorOptions o;
        o.coords = c;
        o.t_max = 100;
        const Trajectory t = integrate(p, {0.3, 0.2, 0.4, 0.0, 0.0}, o);
        CHECK(t.termination == Termination::completed);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const State x = t.linear_state(i);
            CHECK(x[3] == 0.0);
            CHECK(x[4] == 0.0);
        }
    }
}

TEST_CASE("step budget truncation is reported") {
    IntegratorOptions o;
    o.t_max = 1000;
    o.max_steps = 10;
    const Trajectory t = integrate(Params{}, {0.1, 0.2, 0.3, 0.2, 0.1}, o);
    CHECK(t.termination == Termination::max_steps);
    CHECK(t.truncated());
    CHECK(t.steps == 10);
}

TEST_CASE("record stride keeps the final state") {
    IntegratorOptions o;
    o.t_max = 10;
    o.record_stride = 7;
    const Trajectory t = integrate(Params{}, {0.1, 0.2, 0.3, 0.2, 0.1}, o);
    CHECK(t.times.back() == 10.0);
    CHECK(t.size() <= t.steps / 7 + 2);
}

TEST_CASE("default initial condition is seeded") {
    const Params p{1.2, 1.0, 1.0, 0.8};
    const State a = default_initial_condition(p, 42), b = default_initial_condition(p, 42);
    const State c = default_initial_condition(p, 43);
    CHECK(a == b);
    CHECK(a != c);
    const State q = xi_q(p).coords;
    double r = 0;
    for (std::size_t i = 0; i < 5; ++i) r += (a[i] - q[i]) * (a[i] - q[i]);
    CHECK(std::sqrt(r) == doctest::Approx(1e-3));
}

TEST_CASE("trajectory CSV") {
    IntegratorOptions o;
    o.t_max = 1;
    const Trajectory t = integrate(Params{}, {0.1, 0.2, 0.3, 0.2, 0.1}, o);
    std::ostringstream os;
    write_csv(os, t);
    const std::string s = os.str();
    CHECK(s.rfind("t,x1,x2,x3,x4,x5,mode\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(t.size() + 1));
}

}
