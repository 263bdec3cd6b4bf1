// Command-line front end: equilibria, simulation, itineraries, stability
// reports, sweeps, boundary tracing, tongue enumeration and return-map orbits.

#include "hetnet/error.hpp"
#include "hetnet/format.hpp"
#include "hetnet/integrator.hpp"
#include "hetnet/itinerary.hpp"
#include "hetnet/model.hpp"
#include "hetnet/return_map.hpp"
#include "hetnet/stability.hpp"
#include "hetnet/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hetnet;

constexpr const char* kVersion = "0.1.0";

struct Config {
    double ca = 1.2, cb = 1.0, ea = 1.0, eb = 0.8;
    std::string seq;
    double h = -1.0;  // proximity radius H, or section radius h for `orbit`
    double tmax = -1.0;
    double rtol = 1e-10;
    std::uint64_t seed = 42;
    std::string out;
    unsigned threads = 1;
    std::size_t budget = 200;
    double step = 0.005;
    std::string start;
    std::string grid = "0.25:2.5:100,0.25:2.5:100";
    std::string coords = "log";
    std::size_t stride = 1;
    std::string components = "TD";
    std::size_t max_length = 8;
    std::size_t circuits = 20;
    bool free_mode = false;
    double theta_star = -1.0;
};

Params params(const Config& c) {
    Params p{c.ca, c.cb, c.ea, c.eb};
    p.validate();
    return p;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    return parts;
}

// Destination stream: --out file or stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string g_invocation;

void header(std::ostream& os, const Config& c) {
    os << "# hetnet " << kVersion << " |" << g_invocation << " | seed=" << c.seed << '\n';
}

void add_params(CLI::App* app, Config& c) {
    app->set_help_flag("--help", "print this help and exit");
    app->add_option("--ca", c.ca, "competition rate c_A")->capture_default_str();
    app->add_option("--cb", c.cb, "competition rate c_B")->capture_default_str();
    app->add_option("--ea", c.ea, "expansion rate e_A")->capture_default_str();
    app->add_option("--eb", c.eb, "expansion rate e_B")->capture_default_str();
    app->add_option("--out", c.out, "output file (default: standard output)");
}

void add_sim(CLI::App* app, Config& c, double default_tmax) {
    c.tmax = default_tmax;
    app->add_option("--tmax", c.tmax, "integration end time")->capture_default_str();
    app->add_option("--rtol", c.rtol, "relative tolerance")->capture_default_str();
    app->add_option("--seed", c.seed, "seed of the initial perturbation")->capture_default_str();
}

int cmd_equilibria(const Config& c) {
    const Params p = params(c);
    Output out(c.out);
    std::ostream& os = out.os();
    header(os, c);
    for (int j = 1; j <= 5; ++j) {
        const Equilibrium e = xi_axis(p, j);
        os << "xi_" << j << " eigenvalues:";
        for (const auto& v : e.eigenvalues) os << ' ' << fmt(v.real(), 12);
        os << '\n';
    }
    try {
        const Equilibrium q = xi_q(p);
        const XiQSpectrum s = xi_q_eigenvalues(p);
        os << "xi_Q x: " << fmt(q.coords[0], 15) << '\n';
        os << "xi_Q mu:";
        for (const auto& m : s.mu) os << ' ' << fmt(m, 12);
        os << "  (radial: mu_" << s.radial_index + 1 << ")\n";
        os << "xi_Q Re(mu_1): " << fmt(s.re_mu1, 12) << "  Re(mu_2): " << fmt(s.re_mu2, 12) << '\n';
        os << "xi_Q stability: " << to_string(xi_q_stable(p)) << '\n';
    } catch (const DomainError& e) {
        os << "xi_Q: " << e.what() << '\n';
    }
    try {
        const Equilibrium t = xi_t(p, 0);
        os << "xi_T x: " << fmt(t.coords[0], 15) << ' ' << fmt(t.coords[1], 15) << ' ' << fmt(t.coords[2], 15)
           << '\n';
        os << "xi_T eigenvalues:";
        for (const auto& v : t.eigenvalues) os << ' ' << fmt(v, 12);
        os << '\n';
    } catch (const DomainError& e) {
        os << "xi_T: " << e.what() << '\n';
    }
    const DerivedQuantities d = derived_quantities(p);
    os << "delta_T: " << fmt(d.delta_t, 15);
    if (std::abs(d.delta_t - 1.0) <= 1e-12) os << "  (boundary: delta_T = 1)";
    os << '\n';
    if (d.lambda_4) os << "lambda_4: " << fmt(*d.lambda_4, 15) << "\nlambda_5: " << fmt(*d.lambda_5, 15) << '\n';
    os << "delta_TQ: " << (d.delta_tq ? fmt(*d.delta_tq, 15) : std::string("undefined")) << '\n';
    os << "nu_4: " << fmt(d.nu_4, 15) << "\nnu_5: " << fmt(d.nu_5, 15) << '\n';
    os << "beta: " << fmt(d.beta, 17) << '\n';
    os << "min(cA,cB)>max(eA,eB): " << (d.sufficient_condition ? "yes" : "no") << '\n';
    return 0;
}

IntegratorOptions integrator_options(const Config& c) {
    IntegratorOptions o;
    o.t_max = c.tmax;
    o.rel_tol = c.rtol;
    o.record_stride = c.stride;
    o.max_step = 1.0;
    if (c.coords == "linear") o.coords = Coordinates::linear;
    else if (c.coords != "log") throw std::invalid_argument("--coords must be log or linear");
    return o;
}

int cmd_simulate(const Config& c) {
    const Params p = params(c);
    const Trajectory tr = integrate(p, default_initial_condition(p, c.seed), integrator_options(c));
    Output out(c.out);
    header(out.os(), c);
    write_csv(out.os(), tr);
    if (tr.truncated()) {
        std::cerr << "warning: trajectory truncated (" << to_string(tr.termination) << ")\n";
    }
    return 0;
}

int cmd_itinerary(const Config& c) {
    const Params p = params(c);
    const double H = c.h > 0 ? c.h : kDefaultProximity;
    check_proximity(H);
    const Trajectory tr = integrate(p, default_initial_condition(p, c.seed), integrator_options(c));
    const ItineraryRecord it = extract_itinerary(tr, H);
    const WordResult w = word_of(it);
    const RootDetection rd = detect_root(w.word);
    Output out(c.out);
    header(out.os(), c);
    write_csv(out.os(), it);
    std::ostream& summary = c.out.empty() ? out.os() : std::cout;
    summary << "# " << (rd.status == RootStatus::root ? rd.root.letters() : to_string(rd.status))
            << " period=" << rd.period << " defects=" << w.defects.size() << " letters=" << w.word.size() << '\n';
    return 0;
}

int cmd_fas(const Config& c) {
    const Params p = params(c);
    if (c.seq.empty()) throw std::invalid_argument("--seq is required");
    const RootSequence seq = RootSequence::parse(c.seq);
    const StabilityReport r = sequence_stability(seq, p);
    Output out(c.out);
    std::ostream& os = out.os();
    header(os, c);
    write_csv_header(os);
    write_csv_row(os, r);
    if (seq.letters() == "A" || seq.letters() == "B" || seq.letters() == "AAB") {
        const ClosedFormResult cf = closed_form(seq, p);
        os << "# closed form: " << to_string(cf.verdict);
        for (const auto& cond : cf.conditions) os << " | " << cond.name << " margin=" << fmt(cond.margin, 12);
        os << '\n';
    }
    if (!r.reliable) std::cerr << "warning: near-defective matrix in the collection\n";
    return 0;
}

int cmd_sweep(const Config& c) {
    GridSpec g;
    g.e_a = c.ea;
    g.e_b = c.eb;
    const auto axes = split(c.grid, ',');
    if (axes.size() != 2) throw std::invalid_argument("--grid must look like ca0:ca1:n,cb0:cb1:m");
    auto axis = [](const std::string& s, double& lo, double& hi, std::size_t& n) {
        const auto f = split(s, ':');
        if (f.size() != 3) throw std::invalid_argument("--grid must look like ca0:ca1:n,cb0:cb1:m");
        lo = parse_double(f[0]);
        hi = parse_double(f[1]);
        const double count = parse_double(f[2]);
        if (count < 2 || count != std::floor(count)) throw std::invalid_argument("grid counts must be integers >= 2");
        n = static_cast<std::size_t>(count);
    };
    axis(axes[0], g.ca_min, g.ca_max, g.n_ca);
    axis(axes[1], g.cb_min, g.cb_max, g.n_cb);
    const std::string seqs = c.seq.empty() ? std::string("A,B,AAB") : c.seq;
    for (const auto& s : split(seqs, ',')) g.sequences.push_back(RootSequence::parse(s));
    const auto rows = grid_sweep(g, c.threads);
    Output out(c.out);
    header(out.os(), c);
    write_grid_csv(out.os(), rows);
    return 0;
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    const auto f = split(s, ',');
    if (f.size() != 2) throw std::invalid_argument(std::string(what) + " must look like a,b");
    return {parse_double(f[0]), parse_double(f[1])};
}

int cmd_trace(const Config& c) {
    if (c.seq.empty()) throw std::invalid_argument("--seq is required");
    if (c.start.empty()) throw std::invalid_argument("--start is required");
    const RootSequence seq = RootSequence::parse(c.seq);
    TraceOptions o;
    o.step = c.step;
    o.e_a = c.ea;
    o.e_b = c.eb;
    const BoundaryPolyline line = trace_boundary(seq, parse_pair(c.start, "--start"), o);
    if (line.points.empty()) throw NumericalError(line.diagnostic);
    Output out(c.out);
    header(out.os(), c);
    write_boundary_csv(out.os(), line);
    if (!line.diagnostic.empty()) std::cerr << "note: " << line.diagnostic << '\n';
    return 0;
}

int cmd_tongues(const Config& c) {
    const auto list = enumerate_tongues({c.components, c.max_length});
    Output out(c.out);
    header(out.os(), c);
    out.os() << "seq,length\n";
    for (const auto& s : list) out.os() << s.letters() << ',' << s.size() << '\n';
    return 0;
}

int cmd_classify(const Config& c) {
    const Params p = params(c);
    ClassifyOptions o;
    o.budget = c.budget;
    o.seed = c.seed;
    o.rel_tol = c.rtol;
    if (c.h > 0) o.H = c.h;
    if (c.tmax > 0) o.t_max = c.tmax;
    const Classification cl = classify_by_simulation(p, o);
    Output out(c.out);
    header(out.os(), c);
    write_classification_header(out.os());
    write_classification_row(out.os(), p, cl);
    if (c.out.empty()) std::cout << to_string(cl.outcome) << '\n';
    return 0;
}

int cmd_orbit(const Config& c) {
    const Params p = params(c);
    MapParams mp;
    if (c.h > 0) mp.h = c.h;
    if (c.theta_star > 0) mp.theta_star = c.theta_star;
    mp.validate();
    Orbit orbit;
    if (c.free_mode) {
        // A generic small start just after a type A arrival.
        const LogMapState s0{std::log(1e-6), std::log(1e-6), std::log(1e-4), 'A'};
        orbit = iterate_free(s0, c.circuits, mp, p);
    } else {
        if (c.seq.empty()) throw std::invalid_argument("--seq is required unless --free is given");
        const RootSequence seq = RootSequence::parse(c.seq);
        // Start along the leading eigenvector when it is real and positive.
        const LogMapState s0 = eigen_start(seq, p, 30.0).value_or(LogMapState{-30.0, -30.0, -30.0, seq[seq.size() - 1]});
        orbit = iterate_forced(seq, s0, c.circuits, mp, p);
    }
    Output out(c.out);
    header(out.os(), c);
    write_csv(out.os(), orbit);
    if (orbit.escaped) std::cerr << "note: " << orbit.diagnostic << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) g_invocation += std::string(" ") + argv[i];

    CLI::App app{"Heteroclinic network toolkit for the five-species cyclic competition model"};
    // "--h" is a real option below, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Config cfg;
    int (*handler)(const Config&) = nullptr;

    auto* eq = app.add_subcommand("equilibria", "equilibria, eigenvalues and derived quantities");
    add_params(eq, cfg);
    eq->callback([&] { handler = cmd_equilibria; });

    auto* sim = app.add_subcommand("simulate", "integrate from the perturbed interior equilibrium");
    add_params(sim, cfg);
    add_sim(sim, cfg, 1000.0);
    sim->add_option("--coords", cfg.coords, "log or linear")->capture_default_str();
    sim->add_option("--stride", cfg.stride, "record every n-th step")->capture_default_str();
    sim->callback([&] { handler = cmd_simulate; });

    auto* iti = app.add_subcommand("itinerary", "simulate and extract the itinerary and root sequence");
    add_params(iti, cfg);
    add_sim(iti, cfg, 50000.0);
    iti->add_option("--h", cfg.h, "proximity radius H (default 0.3)");
    iti->callback([&] { handler = cmd_itinerary; });

    auto* fas = app.add_subcommand("fas", "stability report for one root sequence");
    add_params(fas, cfg);
    fas->add_option("--seq", cfg.seq, "root sequence, e.g. AABBB or T2D")->required();
    fas->callback([&] { handler = cmd_fas; });

    auto* sw = app.add_subcommand("sweep", "grid sweep of the stability scalar");
    add_params(sw, cfg);
    sw->add_option("--seq", cfg.seq, "comma-separated sequences (default A,B,AAB)");
    sw->add_option("--grid", cfg.grid, "ca0:ca1:n,cb0:cb1:m")->capture_default_str();
    sw->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    sw->callback([&] { handler = cmd_sweep; });

    auto* tr = app.add_subcommand("trace", "trace the stability boundary s = 0");
    add_params(tr, cfg);
    tr->add_option("--seq", cfg.seq, "root sequence")->required();
    tr->add_option("--start", cfg.start, "starting point ca,cb")->required();
    tr->add_option("--step", cfg.step, "step length in parameter units")->capture_default_str();
    tr->callback([&] { handler = cmd_trace; });

    auto* to = app.add_subcommand("tongues", "enumerate block sequences");
    to->set_help_flag("--help", "print this help and exit");
    to->add_option("--out", cfg.out, "output file (default: standard output)");
    to->add_option("--components", cfg.components, "blocks drawn from T, D, Q")->capture_default_str();
    to->add_option("--max-length", cfg.max_length, "maximum letters")->capture_default_str();
    to->callback([&] { handler = cmd_tongues; });

    auto* cl = app.add_subcommand("classify", "classify the long-time behaviour by simulation");
    add_params(cl, cfg);
    cl->add_option("--budget", cfg.budget, "letters examined")->capture_default_str();
    cl->add_option("--seed", cfg.seed, "seed of the initial perturbation")->capture_default_str();
    cl->add_option("--h", cfg.h, "proximity radius H (default 0.3)");
    cl->add_option("--tmax", cfg.tmax, "integration end time (default 50000)");
    cl->add_option("--rtol", cfg.rtol, "relative tolerance")->capture_default_str();
    cl->callback([&] { handler = cmd_classify; });

    auto* orb = app.add_subcommand("orbit", "iterate the return map");
    add_params(orb, cfg);
    orb->add_option("--seq", cfg.seq, "root sequence for forced mode");
    orb->add_flag("--free", cfg.free_mode, "select branches by theta_e against theta_star");
    orb->add_option("--circuits", cfg.circuits, "circuits (forced) or steps (free)")->capture_default_str();
    orb->add_option("--h", cfg.h, "section radius h (default 0.1)");
    orb->add_option("--theta-star", cfg.theta_star, "branch threshold (default pi/4)");
    orb->callback([&] { handler = cmd_orbit; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return handler(cfg);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
