#include "hetnet/sweep.hpp"

#include "hetnet/error.hpp"
#include "hetnet/format.hpp"
#include "hetnet/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace hetnet {

void GridSpec::validate() const {
    if (!(ca_min > 0.0 && cb_min > 0.0 && ca_max >= ca_min && cb_max >= cb_min))
        throw std::invalid_argument("grid ranges must be positive and ordered");
    if (n_ca < 2 || n_cb < 2) throw std::invalid_argument("grid counts must be at least 2");
    if (sequences.empty()) throw std::invalid_argument("grid sweep needs at least one sequence");
    Params{ca_min, cb_min, e_a, e_b}.validate();
}

double GridSpec::ca(std::size_t i) const {
    return ca_min + (ca_max - ca_min) * static_cast<double>(i) / static_cast<double>(n_ca - 1);
}

double GridSpec::cb(std::size_t j) const {
    return cb_min + (cb_max - cb_min) * static_cast<double>(j) / static_cast<double>(n_cb - 1);
}

std::vector<GridRow> grid_sweep(const GridSpec& spec, unsigned threads) {
    spec.validate();
    const std::size_t ns = spec.sequences.size();
    const std::size_t per_seq = spec.n_ca * spec.n_cb;
    std::vector<GridRow> rows(ns * per_seq);

    // One work item is one c_A row for one sequence.
    const std::size_t items = ns * spec.n_ca;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t item = next++; item < items; item = next++) {
            const std::size_t s = item / spec.n_ca;
            const std::size_t i = item % spec.n_ca;
            for (std::size_t j = 0; j < spec.n_cb; ++j) {
                GridRow& r = rows[s * per_seq + i * spec.n_cb + j];
                r.ca = spec.ca(i);
                r.cb = spec.cb(j);
                r.report = sequence_stability(spec.sequences[s], {r.ca, r.cb, spec.e_a, spec.e_b});
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

double stability_scalar(const RootSequence& seq, double ca, double cb, double e_a, double e_b) {
    return sequence_stability(seq, {ca, cb, e_a, e_b}).s;
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

double dist(Point a, Point b) { return std::hypot(a.first - b.first, a.second - b.second); }

struct Tracer {
    const RootSequence& seq;
    const TraceOptions& o;

    double f(Point q) const { return stability_scalar(seq, q.first, q.second, o.e_a, o.e_b); }

    bool inside(Point q) const {
        return q.first >= o.ca_min && q.first <= o.ca_max && q.second >= o.cb_min && q.second <= o.cb_max;
    }

    // Bisection on a parametrised segment/arc; fa and fb have opposite signs
    // (or one vanishes).
    template <typename Path>
    Point bisect(const Path& path, double a, double b, double fa) const {
        if (fa == 0.0) return path(a);
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            const Point pm = path(m);
            if (dist(path(a), path(b)) < 1e-13) break;
            const double fm = f(pm);
            if (fm == 0.0) return pm;
            if (sign_of(fm) == sign_of(fa)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return path(0.5 * (a + b));
    }

    // Zero crossings on the circle of radius r around c.
    std::vector<Point> circle_crossings(Point c, double r, std::size_t n = 72) const {
        auto path = [&](double a) { return Point{c.first + r * std::cos(a), c.second + r * std::sin(a)}; };
        std::vector<double> vals(n + 1);
        const double da = 2.0 * std::numbers::pi / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) vals[k] = f(path(da * static_cast<double>(k)));
        vals[n] = vals[0];
        std::vector<Point> out;
        for (std::size_t k = 0; k < n; ++k) {
            const int s0 = sign_of(vals[k]), s1 = sign_of(vals[k + 1]);
            if (s0 == 0 || s0 * s1 < 0) {
                const Point q = bisect(path, da * static_cast<double>(k), da * static_cast<double>(k + 1), vals[k]);
                if (std::abs(f(q)) <= o.s_tol) out.push_back(q);
            }
        }
        return out;
    }

    // Corrector on the normal line through `pred`, within +-h.
    std::optional<Point> correct(Point pred, Point normal, double h) const {
        auto path = [&](double t) { return Point{pred.first + t * normal.first, pred.second + t * normal.second}; };
        constexpr int n = 8;
        double best_t = 0.0;
        std::optional<std::pair<double, double>> bracket;
        double fa_best = 0.0;
        std::array<double, n + 1> ts{}, vs{};
        for (int k = 0; k <= n; ++k) {
            ts[static_cast<std::size_t>(k)] = -h + 2.0 * h * k / n;
            vs[static_cast<std::size_t>(k)] = f(path(ts[static_cast<std::size_t>(k)]));
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (sign_of(vs[k]) * sign_of(vs[k + 1]) <= 0) {
                const double mid = 0.5 * (ts[k] + ts[k + 1]);
                if (!bracket || std::abs(mid) < std::abs(best_t)) {
                    bracket = {ts[k], ts[k + 1]};
                    best_t = mid;
                    fa_best = vs[k];
                }
            }
        }
        if (!bracket) return std::nullopt;
        const Point q = bisect(path, bracket->first, bracket->second, fa_best);
        if (std::abs(f(q)) > o.s_tol) return std::nullopt;
        return q;
    }

    // March from (prev, cur) until an edge, closure, or failure.
    std::vector<Point> march(Point prev, Point cur, Point origin, bool& closed, std::string& diag,
                             std::size_t budget) const {
        std::vector<Point> pts;
        double h = o.step;
        while (pts.size() < budget) {
            const double len = dist(prev, cur);
            const Point d{(cur.first - prev.first) / len, (cur.second - prev.second) / len};
            std::optional<Point> next;
            for (int attempt = 0; attempt < 7 && !next; ++attempt) {
                const Point pred{cur.first + h * d.first, cur.second + h * d.second};
                next = correct(pred, {-d.second, d.first}, h);
                if (next && (dist(*next, cur) < 0.25 * h || dist(*next, cur) > 2.0 * h)) next.reset();
                if (!next) h *= 0.5;
            }
            if (!next) {
                diag = "corrector failed to bracket a sign change";
                break;
            }
            if (!inside(*next)) break;
            if (pts.size() > 3 && dist(*next, origin) < 0.75 * o.step) {
                closed = true;
                break;
            }
            pts.push_back(*next);
            prev = cur;
            cur = *next;
            h = std::min(o.step, 2.0 * h);
        }
        return pts;
    }
};

}  // namespace

BoundaryPolyline trace_boundary(const RootSequence& seq, Point start, const TraceOptions& opts) {
    if (!(opts.step > 0.0)) throw std::invalid_argument("trace step must be positive");
    if (!(opts.ca_min > 0.0 && opts.cb_min > 0.0)) throw std::invalid_argument("trace domain must be positive");
    Params{start.first, start.second, opts.e_a, opts.e_b}.validate();
    Tracer tr{seq, opts};
    BoundaryPolyline line;
    line.sequence = seq;

    Point p0 = start;
    if (std::abs(tr.f(start)) > opts.s_tol) {
        bool found = false;
        for (double r = opts.step; r <= 16.0 * opts.step && !found; r *= 2.0) {
            const auto xs = tr.circle_crossings(start, r);
            if (!xs.empty()) {
                p0 = xs.front();
                found = true;
            }
        }
        if (!found) {
            line.diagnostic = "no sign change of s near the start point";
            return line;
        }
    }

    const auto around = tr.circle_crossings(p0, opts.step);
    if (around.empty()) {
        line.points.push_back(p0);
        line.s_values.push_back(tr.f(p0));
        line.diagnostic = "isolated zero: no crossing on the circle around the first point";
        return line;
    }
    // Two most nearly opposite crossings give the two directions.
    Point a = around.front(), b = around.front();
    double best = -1.0;
    for (std::size_t i = 0; i < around.size(); ++i)
        for (std::size_t j = i + 1; j < around.size(); ++j)
            if (dist(around[i], around[j]) > best) {
                best = dist(around[i], around[j]);
                a = around[i];
                b = around[j];
            }

    bool closed = false;
    std::string diag;
    std::vector<Point> forward;
    if (tr.inside(a)) {
        forward.push_back(a);
        const auto more = tr.march(p0, a, p0, closed, diag, opts.max_points);
        forward.insert(forward.end(), more.begin(), more.end());
    }
    std::vector<Point> backward;
    if (!closed && around.size() > 1 && tr.inside(b)) {
        backward.push_back(b);
        std::string diag2;
        bool closed2 = false;
        const auto more = tr.march(p0, b, p0, closed2, diag2, opts.max_points);
        backward.insert(backward.end(), more.begin(), more.end());
        if (diag.empty()) diag = diag2;
    }
    line.points.assign(backward.rbegin(), backward.rend());
    line.points.push_back(p0);
    line.points.insert(line.points.end(), forward.begin(), forward.end());
    line.closed = closed;
    line.diagnostic = diag;
    for (const auto& q : line.points) line.s_values.push_back(tr.f(q));
    return line;
}

std::vector<RootSequence> enumerate_tongues(const TongueFamily& family) {
    if (family.max_length < 3) throw std::invalid_argument("max_length must be at least 3");
    if (family.components.empty()) throw std::invalid_argument("no tongue components given");
    std::vector<std::string> blocks;
    for (char c : family.components) {
        switch (c) {
            case 'T': blocks.emplace_back("AAB"); break;
            case 'D': blocks.emplace_back("BB"); break;
            case 'Q': blocks.emplace_back("ABBB"); break;
            default: throw std::invalid_argument("tongue components must be drawn from T, D, Q");
        }
    }
    std::set<RootSequence> seen;
    std::vector<std::string> frontier{""};
    while (!frontier.empty()) {
        std::vector<std::string> grown;
        for (const auto& w : frontier)
            for (const auto& b : blocks) {
                std::string nw = w + b;
                if (nw.size() > family.max_length) continue;
                seen.insert(RootSequence(nw));
                grown.push_back(std::move(nw));
            }
        frontier = std::move(grown);
    }
    return {seen.begin(), seen.end()};
}

std::vector<Interval> fas_intervals(const RootSequence& seq, const std::function<Point(double)>& path, double t0,
                                    double t1, std::size_t n, double e_a, double e_b, double tol) {
    if (n < 2) throw std::invalid_argument("line scan needs at least two samples");
    auto is_fas = [&](double t) {
        const Point q = path(t);
        return sequence_stability(seq, {q.first, q.second, e_a, e_b}).verdict == Verdict::fas;
    };
    auto refine = [&](double in, double out) {
        while (std::abs(in - out) > tol) {
            const double m = 0.5 * (in + out);
            if (is_fas(m)) in = m;
            else out = m;
        }
        return in;
    };
    std::vector<Interval> out;
    double prev_t = t0;
    bool prev = is_fas(t0);
    std::optional<double> open;
    if (prev) open = t0;
    for (std::size_t k = 1; k < n; ++k) {
        const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
        const bool cur = is_fas(t);
        if (cur && !prev) open = refine(t, prev_t);
        if (!cur && prev) out.push_back({*open, refine(prev_t, t)});
        prev = cur;
        prev_t = t;
    }
    if (prev) out.push_back({*open, t1});
    return out;
}

std::string to_string(SimOutcome o) {
    switch (o) {
        case SimOutcome::root: return "root";
        case SimOutcome::irregular: return "irregular";
        case SimOutcome::equilibrium: return "equilibrium";
        case SimOutcome::sigma_tq: return "sigma_tq";
        case SimOutcome::periodic: return "periodic";
        case SimOutcome::insufficient: return "insufficient";
    }
    return "?";
}

void ClassifyOptions::validate() const {
    if (budget < 50) throw std::invalid_argument("letter budget must be at least 50");
    check_proximity(H);
    if (!(t_max > 0.0) || !(max_step > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("integration settings must be positive");
}

namespace {

double distance(const State& a, const State& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kSpecies; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

// Visits to the three-species equilibria rho^r xi_T, as an itinerary of rotations.
std::size_t xi_t_visits(const Params& p, const Trajectory& traj, double radius) {
    std::array<State, 5> targets{};
    try {
        for (int r = 0; r < 5; ++r) targets[static_cast<std::size_t>(r)] = xi_t(p, r).coords;
    } catch (const DomainError&) {
        return 0;
    }
    std::size_t visits = 0;
    int current = -1;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State x = traj.linear_state(i);
        for (int r = 0; r < 5; ++r) {
            if (distance(x, targets[static_cast<std::size_t>(r)]) <= radius && r != current) {
                current = r;
                ++visits;
            }
        }
    }
    return visits;
}

}  // namespace

Classification classify_by_simulation(const Params& p, const ClassifyOptions& opts) {
    p.validate();
    opts.validate();
    IntegratorOptions io;
    io.coords = Coordinates::log;
    io.t_max = opts.t_max;
    io.max_step = opts.max_step;
    io.rel_tol = opts.rel_tol;
    io.max_steps = 20'000'000;
    const Trajectory traj = integrate(p, default_initial_condition(p, opts.seed), io);

    Classification c;
    c.termination = traj.termination;
    c.itinerary = extract_itinerary(traj, opts.H);
    const WordResult wr = word_of(c.itinerary);
    c.defects = wr.defects.size();
    c.word = wr.word.substr(0, std::min(wr.word.size(), opts.budget));
    c.letters = c.word.size();

    if (c.itinerary.epochs.size() < 2) {
        const State last = traj.linear_state(traj.size() - 1);
        State q{};
        bool have_q = true;
        try {
            q = xi_q(p).coords;
        } catch (const DomainError&) {
            have_q = false;
        }
        if (have_q && distance(last, q) < 1e-6) {
            c.outcome = SimOutcome::equilibrium;
            c.detail = "converged to the interior equilibrium";
        } else if (xi_t_visits(p, traj, 0.05) >= 3) {
            c.outcome = SimOutcome::sigma_tq;
            c.detail = "repeated visits to the three-species equilibria";
        } else if (c.itinerary.epochs.size() == 1 && distance(last, axis_point(c.itinerary.epochs[0].m)) < 1e-6) {
            c.outcome = SimOutcome::equilibrium;
            c.detail = "converged to a single-species equilibrium";
        } else {
            c.outcome = SimOutcome::periodic;
            c.detail = "no approach to the network";
        }
        return c;
    }

    const RootDetection rd = detect_root(c.word, 0.5);
    if (rd.status == RootStatus::root) {
        c.outcome = SimOutcome::root;
        c.root = rd.root;
    } else if (c.letters >= 24) {
        c.outcome = SimOutcome::irregular;
        c.detail = "no periodic suffix in " + std::to_string(c.letters) + " letters";
    } else {
        c.outcome = SimOutcome::insufficient;
        c.detail = "only " + std::to_string(c.letters) + " letters before the run ended";
    }
    return c;
}

CrossValidation cross_validate(const Params& p, const ClassifyOptions& opts, double ratio_tol) {
    CrossValidation cv;
    cv.classification = classify_by_simulation(p, opts);
    const Classification& c = cv.classification;
    if (c.outcome != SimOutcome::root || !c.root) {
        cv.message = "simulation produced no root sequence (" + to_string(c.outcome) + ")";
        return cv;
    }
    cv.report = sequence_stability(*c.root, p);
    cv.lambda_max = cv.report->per_matrix.front().lambda_max.real();
    if (cv.report->verdict != Verdict::fas) {
        cv.message = "simulated root " + c.root->letters() + " is " + to_string(cv.report->verdict);
        return cv;
    }
    const std::size_t m = c.root->size();
    const EpochRatios er = epoch_ratios(c.itinerary, m);
    if (er.ratios.size() < 5 * m) {
        cv.message = "too few epochs for five circuits of ratios";
        return cv;
    }
    cv.tail_ratios.assign(er.ratios.end() - static_cast<std::ptrdiff_t>(5 * m), er.ratios.end());
    for (double r : cv.tail_ratios)
        cv.max_relative_deviation = std::max(cv.max_relative_deviation, std::abs(r / cv.lambda_max - 1.0));
    cv.passed = cv.max_relative_deviation <= ratio_tol;
    cv.message = cv.passed ? "ok" : "epoch ratios deviate from lambda_max by " + fmt(cv.max_relative_deviation, 4);
    return cv;
}

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows) {
    os << "cA,cB,seq,s,verdict,fail_matrix,fail_component\n";
    for (const auto& r : rows) {
        os << fmt(r.ca) << ',' << fmt(r.cb) << ',' << r.report.sequence.letters() << ',' << fmt(r.report.s) << ','
           << to_string(r.report.verdict) << ',';
        if (r.report.failing_matrix) os << *r.report.failing_matrix + 1;
        os << ',';
        if (r.report.failing_component) os << *r.report.failing_component + 1;
        os << '\n';
    }
}

void write_boundary_csv(std::ostream& os, const BoundaryPolyline& line) {
    os << "seq,idx,cA,cB,s\n";
    for (std::size_t i = 0; i < line.points.size(); ++i)
        os << line.sequence.letters() << ',' << i << ',' << fmt(line.points[i].first) << ','
           << fmt(line.points[i].second) << ',' << fmt(line.s_values[i]) << '\n';
}

void write_classification_header(std::ostream& os) { os << "cA,cB,outcome,root,period,lambda_max\n"; }

void write_classification_row(std::ostream& os, const Params& p, const Classification& c) {
    os << fmt(p.c_a) << ',' << fmt(p.c_b) << ',' << to_string(c.outcome) << ',';
    if (c.root) {
        const StabilityReport r = sequence_stability(*c.root, p);
        os << c.root->letters() << ',' << c.root->size() << ',' << fmt(r.per_matrix.front().lambda_max.real());
    } else {
        os << ",,";
    }
    os << '\n';
}

}  // namespace hetnet
