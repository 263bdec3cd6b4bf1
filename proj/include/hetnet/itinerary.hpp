#pragma once

#include "hetnet/integrator.hpp"
#include "hetnet/word.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace hetnet {

inline constexpr double kDefaultProximity = 0.3;

/// Throws std::invalid_argument unless 0 < H < sqrt(2)/2.
void check_proximity(double H);

/// k in 1..5 if |x - xi_k| <= H, else 0.
int classify_point(const State& x, double H);

struct Epoch {
    int m = 0;        ///< equilibrium index 1..5
    double tau = 0;   ///< entry time into the H-ball
};

struct ItineraryRecord {
    std::vector<Epoch> epochs;
    double H = kDefaultProximity;
    std::string diagnostic;
};

/// Successive distinct last-visited equilibria of a sampled trajectory.
/// Entry times are interpolated linearly in distance between samples.
ItineraryRecord extract_itinerary(const Trajectory& traj, double H = kDefaultProximity);

struct WordResult {
    Word word;
    /// Epoch indices n whose step n -> n+1 is neither +1 nor +3 (mod 5).
    std::vector<std::size_t> defects;
    /// letter_epoch[i] = epoch index n where letter i starts.
    std::vector<std::size_t> letter_epoch;
};

/// Letters for consecutive epochs; defect steps are reported and skipped.
WordResult word_of(const ItineraryRecord& it);

enum class RootStatus { root, irregular, insufficient };
std::string to_string(RootStatus s);

struct RootDetection {
    RootStatus status = RootStatus::insufficient;
    RootSequence root;
    std::size_t period = 0;
    std::size_t examined = 0;  ///< letters in the retained suffix
};

/// Drop the leading `discard` fraction, then look for the smallest p with
/// p <= len/3 such that the rest is p-periodic. Needs 8 retained letters.
RootDetection detect_root(std::string_view word, double discard = 0.5);

struct EpochRatios {
    std::vector<double> durations;  ///< d(n) = tau(n+1) - tau(n)
    std::vector<double> ratios;     ///< d(n+m) / d(n)
};

/// Empty when fewer than 3m epochs are available.
EpochRatios epoch_ratios(const ItineraryRecord& it, std::size_t m);

/// CSV with header n,m,tau,duration,letter.
void write_csv(std::ostream& os, const ItineraryRecord& it);

}  // namespace hetnet
