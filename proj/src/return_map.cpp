#include "hetnet/return_map.hpp"

#include "hetnet/error.hpp"
#include "hetnet/format.hpp"
#include "hetnet/integrator.hpp"
#include "hetnet/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hetnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfPi = std::numbers::pi / 2.0;

double safe_log(double x) { return x > 0.0 ? std::log(x) : -kInf; }

// log(sin(e^l)) for angles in (0, pi/2], accurate for tiny angles.
double log_sin_of_log(double l) {
    if (l < -20.0) return l;
    return std::log(std::sin(std::exp(l)));
}

double log_cos_of_log(double l) {
    if (l < -20.0) return 0.0;
    return std::log(std::cos(std::exp(l)));
}

// log(atan(e^z)), used for the small angle whose tangent is e^z.
double log_atan_of_log(double z) {
    if (z < -20.0) return z;
    return std::log(std::atan(std::exp(z)));
}

double logsumexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

void MapParams::validate() const {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("section radius h must lie in (0, 1)");
    for (double v : {a3, a5, a_theta, b2, b3, b5, c_a, c_b, c_theta, d_a, d_b, d_theta})
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("map constants must be positive");
    if (!(theta_star > 0.0 && theta_star < kHalfPi)) throw std::invalid_argument("theta_star must lie in (0, pi/2)");
}

double time_of_flight_log(double lxa, double lxb, const Params& p, double h) {
    if (lxa == -kInf && lxb == -kInf) throw NumericalError("no exit: both expanding coordinates vanish");
    const double lh = std::log(h);
    if (lxa == -kInf) return std::max(0.0, (lh - lxb) / p.e_b);
    if (lxb == -kInf) return std::max(0.0, (lh - lxa) / p.e_a);

    auto f = [&](double T) { return logsumexp(2.0 * (lxa + p.e_a * T), 2.0 * (lxb + p.e_b * T)) - 2.0 * lh; };
    if (f(0.0) >= 0.0) return 0.0;

    // Each term alone reaches h^2 at (lh - lx)/e; both stay below h^2/2 before
    // (lh - log(2)/2 - lx)/e.
    double hi = std::min((lh - lxa) / p.e_a, (lh - lxb) / p.e_b);
    double lo = std::max(0.0, std::min((lh - 0.5 * std::log(2.0) - lxa) / p.e_a,
                                       (lh - 0.5 * std::log(2.0) - lxb) / p.e_b));
    double T = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double ga = 2.0 * (lxa + p.e_a * T);
        const double gb = 2.0 * (lxb + p.e_b * T);
        const double lse = logsumexp(ga, gb);
        const double val = lse - 2.0 * lh;
        if (val > 0.0) hi = std::min(hi, T);
        else lo = std::max(lo, T);
        const double wa = std::exp(ga - lse), wb = std::exp(gb - lse);
        const double deriv = 2.0 * (p.e_a * wa + p.e_b * wb);
        double next = T - val / deriv;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - T);
        T = next;
        if (step <= 1e-15 * std::max(1.0, std::abs(T)) || hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    return T;
}

double time_of_flight(double x_a, double x_b, const Params& p, double h) {
    if (x_a < 0.0 || x_b < 0.0) throw std::invalid_argument("section coordinates must be non-negative");
    if (x_a == 0.0 && x_b == 0.0) throw NumericalError("no exit: both expanding coordinates vanish");
    return time_of_flight_log(safe_log(x_a), safe_log(x_b), p, h);
}

MapState local_map(const MapState& in, const Params& p, const MapParams& mp) {
    const double T = time_of_flight(in.x_a, in.x_b, p, mp.h);
    MapState out;
    out.x_b = mp.h * std::cos(in.theta) * std::exp(-p.c_b * T);
    out.x_a = mp.h * std::sin(in.theta) * std::exp(-p.c_a * T);
    out.theta = std::atan2(in.x_a * std::exp((p.e_a - p.e_b) * T), in.x_b);
    return out;
}

MapState global_map(Branch branch, const MapState& out, const MapParams& mp) {
    if (std::abs(out.theta - mp.theta_star) <= 1e-12) throw NumericalError("ambiguous branch: theta_e at theta_star");
    MapState in;
    if (branch == Branch::type_a) {
        if (out.theta < mp.theta_star) throw std::invalid_argument("type A branch needs theta_e > theta_star");
        in.x_a = mp.a3 * out.x_b;
        in.x_b = mp.a5 * out.x_a;
        in.theta = kHalfPi - mp.a_theta * (kHalfPi - out.theta);
    } else {
        if (out.theta > mp.theta_star) throw std::invalid_argument("type B branch needs theta_e < theta_star");
        in.x_a = mp.b5 * out.x_a;
        in.x_b = mp.b2 * out.theta;
        in.theta = mp.b3 * out.x_b;
    }
    return in;
}

namespace {

Vec3 log_constants(char cur, const MapParams& mp) {
    if (cur == 'A') return {std::log(mp.d_a), std::log(mp.d_b), std::log(mp.d_theta)};
    return {std::log(mp.c_a), std::log(mp.c_b), std::log(mp.c_theta)};
}

void check_letter(char c) {
    if (c != 'A' && c != 'B') throw std::invalid_argument("transition letters must be A or B");
}

}  // namespace

LogMapState phi_log(char prev, char cur, const LogMapState& s, const MapParams& mp, const Params& p) {
    check_letter(prev);
    check_letter(cur);
    for (double v : {s.log_xa, s.log_xb, s.log_angle})
        if (!std::isfinite(v)) throw std::invalid_argument("monomial map needs nonzero finite coordinates");
    const Mat3 m = basic_matrix(prev, cur, p).m;
    const Vec3 y = m * Vec3{s.log_xa, s.log_xb, s.log_angle};
    const Vec3 k = log_constants(cur, mp);
    return {y[0] + k[0], y[1] + k[1], y[2] + k[2], cur};
}

MapState phi(char prev, char cur, const MapState& s, const MapParams& mp, const Params& p) {
    if (!(s.x_a > 0.0 && s.x_b > 0.0 && s.theta > 0.0))
        throw std::invalid_argument("monomial map needs strictly positive coordinates");
    const LogMapState out = phi_log(prev, cur, {std::log(s.x_a), std::log(s.x_b), std::log(s.theta), prev}, mp, p);
    return {std::exp(out.log_xa), std::exp(out.log_xb), std::exp(out.log_angle)};
}

Orbit iterate_forced(const RootSequence& seq, const LogMapState& start, std::size_t n_circuits,
                     const MapParams& mp, const Params& p) {
    mp.validate();
    p.validate();
    const std::size_t m = seq.size();
    if (m == 0) throw std::invalid_argument("empty root sequence");
    const double lh = std::log(mp.h);
    Orbit orbit;
    LogMapState s = start;
    s.angle_tag = seq[m - 1];
    for (std::size_t k = 0; k < n_circuits * m; ++k) {
        const char prev = s.angle_tag;
        const char cur = seq[k % m];
        s = phi_log(prev, cur, s, mp, p);
        orbit.steps.push_back({k + 1, prev, cur, s});
        orbit.emitted.push_back(cur);
        if (s.log_xa >= lh || s.log_xb >= lh || s.log_angle >= lh) {
            orbit.escaped = true;
            orbit.diagnostic = "left the section neighbourhood at step " + std::to_string(k + 1);
            break;
        }
    }
    return orbit;
}

std::optional<LogMapState> eigen_start(const RootSequence& seq, const Params& p, double depth) {
    p.validate();
    if (!(depth > 0.0)) throw std::invalid_argument("depth must be positive");
    const std::size_t m = seq.size();
    if (m == 0) throw std::invalid_argument("empty root sequence");
    const EigenData e = eigen3(collection(seq, p).matrices.front().m);
    if (!e.vectors[0] || !on_half_line(e.values[0])) return std::nullopt;
    Vec3 v = *e.vectors[0];
    double smallest = std::min({v[0], v[1], v[2]});
    for (std::size_t k = 0; k < m; ++k) {
        v = basic_matrix(k == 0 ? seq[m - 1] : seq[k - 1], seq[k], p).m * v;
        smallest = std::min({smallest, v[0], v[1], v[2]});
    }
    if (!(smallest > 0.0)) return std::nullopt;
    const double q = depth / smallest;
    const Vec3& w = *e.vectors[0];
    return LogMapState{-q * w[0], -q * w[1], -q * w[2], seq[m - 1]};
}

Orbit iterate_free(const LogMapState& start, std::size_t n_steps, const MapParams& mp, const Params& p) {
    mp.validate();
    p.validate();
    const double lh = std::log(mp.h);
    const double log_tan_star = std::log(std::tan(mp.theta_star));
    Orbit orbit;
    LogMapState s = start;
    for (std::size_t k = 0; k < n_steps; ++k) {
        // Local passage past the equilibrium, in logs.
        double log_sin, log_cos;
        if (s.angle_tag == 'A') {
            log_sin = log_cos_of_log(s.log_angle);
            log_cos = log_sin_of_log(s.log_angle);
        } else {
            log_sin = log_sin_of_log(s.log_angle);
            log_cos = log_cos_of_log(s.log_angle);
        }
        const double T = time_of_flight_log(s.log_xa, s.log_xb, p, mp.h);
        const double lxa_c = lh + log_sin - p.c_a * T;
        const double lxb_c = lh + log_cos - p.c_b * T;
        const double log_tan_e = s.log_xa - s.log_xb + (p.e_a - p.e_b) * T;

        const double theta_e = std::atan(std::exp(log_tan_e));
        if (std::abs(theta_e - mp.theta_star) <= 1e-12) {
            orbit.diagnostic = "ambiguous branch at step " + std::to_string(k + 1);
            break;
        }
        const char prev = s.angle_tag;
        LogMapState next;
        if (log_tan_e > log_tan_star) {
            next.log_xa = std::log(mp.a3) + lxb_c;
            next.log_xb = std::log(mp.a5) + lxa_c;
            next.log_angle = std::min(std::log(mp.a_theta) + log_atan_of_log(-log_tan_e), std::log(kHalfPi));
            next.angle_tag = 'A';
        } else {
            next.log_xa = std::log(mp.b5) + lxa_c;
            next.log_xb = std::log(mp.b2) + log_atan_of_log(log_tan_e);
            next.log_angle = std::min(std::log(mp.b3) + lxb_c, std::log(kHalfPi));
            next.angle_tag = 'B';
        }
        s = next;
        orbit.steps.push_back({k + 1, prev, s.angle_tag, s});
        orbit.emitted.push_back(s.angle_tag);
        if (s.log_xa >= lh || s.log_xb >= lh) {
            orbit.escaped = true;
            orbit.diagnostic = "left the section neighbourhood at step " + std::to_string(k + 1);
            break;
        }
    }
    return orbit;
}

namespace {

// 'A' if the run from angle theta on xi_1's outgoing circle reaches xi_2 first, 'B' for xi_4.
char first_destination(const Params& p, double h, double theta) {
    IntegratorOptions o;
    o.coords = Coordinates::linear;
    o.t_max = 400.0;
    o.max_step = 0.25;
    o.rel_tol = 1e-11;
    o.abs_tol = 1e-14;
    const State x0{1.0, h * std::sin(theta), 0.0, h * std::cos(theta), 0.0};
    const Trajectory tr = integrate(p, x0, o);
    const double r = 0.1;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const State& x = tr.states[i];
        const double d2 = std::hypot(x[0], x[1] - 1.0, x[3]);
        const double d4 = std::hypot(x[0], x[1], x[3] - 1.0);
        if (d2 <= r) return 'A';
        if (d4 <= r) return 'B';
    }
    throw NumericalError("calibration run reached neither xi_2 nor xi_4");
}

}  // namespace

double calibrate_theta_star(const Params& p, double h, double tol) {
    p.validate();
    if (!(h > 0.0 && h < 0.3)) throw std::invalid_argument("calibration radius must lie in (0, 0.3)");
    double lo = 1e-6, hi = kHalfPi - 1e-6;
    if (first_destination(p, h, lo) != 'B' || first_destination(p, h, hi) != 'A')
        throw NumericalError("calibration endpoints do not bracket a branch switch");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (first_destination(p, h, mid) == 'A') hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

void write_csv(std::ostream& os, const Orbit& orbit) {
    os << "k,prev,cur,log_xA,log_xB,log_angle\n";
    for (const auto& s : orbit.steps)
        os << s.k << ',' << s.prev << ',' << s.cur << ',' << fmt(s.state.log_xa) << ',' << fmt(s.state.log_xb)
           << ',' << fmt(s.state.log_angle) << '\n';
}

}  // namespace hetnet
