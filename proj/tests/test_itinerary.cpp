#include "hetnet/integrator.hpp"
#include "hetnet/itinerary.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

using namespace hetnet;

namespace {

// A linear-coordinate trajectory that sits at the given axis points at
// integer-spaced times, with a midpoint between each pair.
Trajectory synthetic(const std::vector<int>& visits, const std::vector<double>& times) {
    Trajectory t;
    t.coords = Coordinates::linear;
    for (std::size_t i = 0; i < visits.size(); ++i) {
        if (i > 0) {
            State mid{};
            mid[static_cast<std::size_t>(visits[i - 1] - 1)] += 0.5;
            mid[static_cast<std::size_t>(visits[i] - 1)] += 0.5;
            t.times.push_back(0.5 * (times[i - 1] + times[i]));
            t.states.push_back(mid);
        }
        t.times.push_back(times[i]);
        t.states.push_back(axis_point(visits[i]));
    }
    return t;
}

}  // namespace

TEST_SUITE("itinerary") {

TEST_CASE("proximity radius") {
    CHECK_NOTHROW(check_proximity(0.3));
    CHECK_THROWS_AS(check_proximity(0.0), std::invalid_argument);
    CHECK_THROWS_AS(check_proximity(0.71), std::invalid_argument);
    CHECK(classify_point({0.9, 0.1, 0, 0, 0}, 0.3) == 1);
    CHECK(classify_point({0, 0, 0, 0, 0.8}, 0.3) == 5);
    CHECK(classify_point({0.5, 0.5, 0, 0, 0}, 0.3) == 0);
    CHECK(classify_point({0.2, 0.2, 0.2, 0.2, 0.2}, 0.3) == 0);
}

TEST_CASE("epochs and entry times from a synthetic trajectory") {
    const Trajectory t = synthetic({1, 2, 5, 1, 2}, {0, 2, 4, 6, 8});
    const ItineraryRecord it = extract_itinerary(t, 0.3);
    REQUIRE(it.epochs.size() == 5);
    CHECK(it.epochs[0].m == 1);
    CHECK(it.epochs[2].m == 5);
    // The midpoint is at distance sqrt(0.5) from either axis point, so entry
    // is interpolated between the midpoint and the vertex.
    const double d0 = std::sqrt(0.5);
    const double frac = (d0 - 0.3) / d0;
    CHECK(it.epochs[1].tau == doctest::Approx(1.0 + frac));
    const WordResult w = word_of(it);
    CHECK(w.word == "ABAA");
    CHECK(w.defects.empty());
    CHECK(w.letter_epoch == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("steps other than +1 and +3 are defects") {
    const Trajectory t = synthetic({1, 3, 4, 2}, {0, 1, 2, 3});
    const WordResult w = word_of(extract_itinerary(t, 0.3));
    CHECK(w.word == "AB");
    CHECK(w.defects == std::vector<std::size_t>{0});
    CHECK(w.letter_epoch == std::vector<std::size_t>{1, 2});
}

TEST_CASE("no visits gives a diagnostic") {
    Trajectory t;
    t.coords = Coordinates::linear;
    t.times = {0, 1};
    t.states = {State{0.2, 0.2, 0.2, 0.2, 0.2}, State{0.2, 0.2, 0.2, 0.2, 0.2}};
    const ItineraryRecord it = extract_itinerary(t);
    CHECK(it.epochs.empty());
    CHECK_FALSE(it.diagnostic.empty());
}

TEST_CASE("root detection") {
    RootDetection r = detect_root("BBAAABABBAABBBAABBBAABBBAABBBAABBB");
    CHECK(r.status == RootStatus::root);
    CHECK(r.root.letters() == "AABBB");
    CHECK(r.period == 5);

    r = detect_root(std::string(40, 'A'));
    CHECK(r.status == RootStatus::root);
    CHECK(r.root.letters() == "A");

    CHECK(detect_root("AAB").status == RootStatus::insufficient);

    // The Fibonacci word is aperiodic.
    std::string a = "A", b = "AB";
    while (b.size() < 200) {
        std::string c = b + a;
        a = b;
        b = c;
    }
    CHECK(detect_root(b).status == RootStatus::irregular);

    // Same root whatever the phase of the tail.
    const std::string base = "AABAABBB";
    std::string w;
    for (int i = 0; i < 10; ++i) w += base;
    for (std::size_t s = 0; s < base.size(); ++s) {
        const RootDetection d = detect_root(w.substr(s));
        CHECK(d.status == RootStatus::root);
        CHECK(d.root.letters() == "AABAABBB");
    }
    CHECK_THROWS_AS(detect_root("AAAA", 1.0), std::invalid_argument);
}

TEST_CASE("epoch duration ratios") {
    ItineraryRecord it;
    double tau = 0, d = 1;
    for (int n = 0; n < 12; ++n) {
        it.epochs.push_back({1 + n % 5, tau});
        tau += d;
        d *= 1.5;
    }
    const EpochRatios r = epoch_ratios(it, 1);
    REQUIRE(r.ratios.size() == 10);
    for (double x : r.ratios) CHECK(x == doctest::Approx(1.5));
    const EpochRatios r2 = epoch_ratios(it, 2);
    for (double x : r2.ratios) CHECK(x == doctest::Approx(2.25));
    CHECK(epoch_ratios(it, 5).ratios.empty());
}

TEST_CASE("simulated cycle at a type A point visits 1,2,3,4,5 in order") {
    const Params p{1.2, 1.0, 1.0, 0.8};
    IntegratorOptions o;
    o.t_max = 3000;
    o.max_step = 1.0;
    const Trajectory t = integrate(p, default_initial_condition(p), o);
    const ItineraryRecord it = extract_itinerary(t);
    REQUIRE(it.epochs.size() > 10);
    const WordResult w = word_of(it);
    const std::string tail = w.word.substr(w.word.size() / 2);
    CHECK(tail == std::string(tail.size(), 'A'));
    for (std::size_t n = it.epochs.size() / 2; n + 1 < it.epochs.size(); ++n)
        CHECK(it.epochs[n + 1].m == it.epochs[n].m % 5 + 1);

    // A rotated start gives the rotated itinerary.
    const Trajectory tr = integrate(p, rotate(default_initial_condition(p)), o);
    const ItineraryRecord itr = extract_itinerary(tr);
    REQUIRE(itr.epochs.size() == it.epochs.size());
    for (std::size_t n = 0; n < it.epochs.size(); ++n) {
        CHECK(itr.epochs[n].m == it.epochs[n].m % 5 + 1);
        CHECK(itr.epochs[n].tau == doctest::Approx(it.epochs[n].tau).epsilon(1e-9));
    }
    CHECK(word_of(itr).word == w.word);
}

TEST_CASE("itinerary CSV") {
    const Trajectory t = synthetic({1, 2, 5}, {0, 2, 4});
    std::ostringstream os;
    write_csv(os, extract_itinerary(t, 0.3));
    const std::string s = os.str();
    CHECK(s.rfind("n,m,tau,duration,letter\n0,1,0,", 0) == 0);
    CHECK(s.find(",A\n") != std::string::npos);
    CHECK(s.find("\n2,5,") != std::string::npos);
    CHECK(s.substr(s.size() - 3) == ",,\n");
}

}
