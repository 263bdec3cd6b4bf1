#include "hetnet/itinerary.hpp"

#include "hetnet/format.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace hetnet {

void check_proximity(double H) {
    if (!(H > 0.0 && H < std::sqrt(2.0) / 2.0))
        throw std::invalid_argument("proximity radius H must lie in (0, sqrt(2)/2)");
}

namespace {

double distance_to_axis(const State& x, std::size_t k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < kSpecies; ++i) {
        const double d = x[i] - (i == k ? 1.0 : 0.0);
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Nearest equilibrium index (0-based) and its distance.
std::pair<std::size_t, double> nearest(const State& x) {
    std::size_t best = 0;
    double bd = distance_to_axis(x, 0);
    for (std::size_t k = 1; k < kSpecies; ++k) {
        const double d = distance_to_axis(x, k);
        if (d < bd) {
            bd = d;
            best = k;
        }
    }
    return {best, bd};
}

}  // namespace

int classify_point(const State& x, double H) {
    check_proximity(H);
    const auto [k, d] = nearest(x);
    return d <= H ? static_cast<int>(k) + 1 : 0;
}

ItineraryRecord extract_itinerary(const Trajectory& traj, double H) {
    check_proximity(H);
    ItineraryRecord rec;
    rec.H = H;
    int current = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const State x = traj.linear_state(i);
        const auto [k, d] = nearest(x);
        if (d > H) continue;
        const int m = static_cast<int>(k) + 1;
        if (m == current) continue;
        double tau = traj.times[i];
        if (i > 0) {
            // Only one ball can contain a point, so the previous sample was outside this one.
            const double d0 = distance_to_axis(traj.linear_state(i - 1), k);
            if (d0 > H && d0 > d) {
                const double frac = (d0 - H) / (d0 - d);
                tau = traj.times[i - 1] + frac * (traj.times[i] - traj.times[i - 1]);
            }
        }
        rec.epochs.push_back({m, tau});
        current = m;
    }
    if (rec.epochs.empty()) rec.diagnostic = "no equilibrium approached within H";
    return rec;
}

WordResult word_of(const ItineraryRecord& it) {
    WordResult r;
    for (std::size_t n = 0; n + 1 < it.epochs.size(); ++n) {
        const int diff = ((it.epochs[n + 1].m - it.epochs[n].m) % 5 + 5) % 5;
        if (diff == 1) {
            r.word.push_back('A');
        } else if (diff == 3) {
            r.word.push_back('B');
        } else {
            r.defects.push_back(n);
            continue;
        }
        r.letter_epoch.push_back(n);
    }
    return r;
}

std::string to_string(RootStatus s) {
    switch (s) {
        case RootStatus::root: return "root";
        case RootStatus::irregular: return "irregular";
        case RootStatus::insufficient: return "insufficient";
    }
    return "?";
}

RootDetection detect_root(std::string_view word, double discard) {
    if (!(discard >= 0.0 && discard < 1.0)) throw std::invalid_argument("discard fraction must lie in [0, 1)");
    RootDetection r;
    const auto drop = static_cast<std::size_t>(std::floor(discard * static_cast<double>(word.size())));
    const std::string_view tail = word.substr(drop);
    r.examined = tail.size();
    if (tail.size() < 8) {
        r.status = RootStatus::insufficient;
        return r;
    }
    for (std::size_t p = 1; p <= tail.size() / 3; ++p) {
        bool periodic = true;
        for (std::size_t i = p; i < tail.size() && periodic; ++i) periodic = tail[i] == tail[i - p];
        if (periodic) {
            r.status = RootStatus::root;
            r.root = RootSequence(tail.substr(0, p));
            r.period = r.root.size();
            return r;
        }
    }
    r.status = RootStatus::irregular;
    return r;
}

EpochRatios epoch_ratios(const ItineraryRecord& it, std::size_t m) {
    EpochRatios r;
    if (m == 0 || it.epochs.size() < 3 * m) return r;
    for (std::size_t n = 0; n + 1 < it.epochs.size(); ++n)
        r.durations.push_back(it.epochs[n + 1].tau - it.epochs[n].tau);
    for (std::size_t n = 0; n + m < r.durations.size(); ++n) r.ratios.push_back(r.durations[n + m] / r.durations[n]);
    return r;
}

void write_csv(std::ostream& os, const ItineraryRecord& it) {
    os << "n,m,tau,duration,letter\n";
    for (std::size_t n = 0; n < it.epochs.size(); ++n) {
        os << n << ',' << it.epochs[n].m << ',' << fmt(it.epochs[n].tau) << ',';
        if (n + 1 < it.epochs.size()) {
            os << fmt(it.epochs[n + 1].tau - it.epochs[n].tau) << ',';
            const int diff = ((it.epochs[n + 1].m - it.epochs[n].m) % 5 + 5) % 5;
            os << (diff == 1 ? "A" : diff == 3 ? "B" : "?");
        } else {
            os << ',';
        }
        os << '\n';
    }
}

}  // namespace hetnet
