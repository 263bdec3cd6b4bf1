#include "support.hpp"

#include "hetnet/error.hpp"
#include "hetnet/model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>

using namespace hetnet;

namespace {

// Right-hand side written out term by term, independent of the library.
State field_by_hand(const Params& p, const State& x) {
    const double X = x[0] + x[1] + x[2] + x[3] + x[4];
    State f{};
    for (int j = 0; j < 5; ++j) {
        auto at = [&](int k) { return x[static_cast<std::size_t>((j + k) % 5)]; };
        const double g = 1 - X - p.c_a * at(1) + p.e_b * at(2) - p.c_b * at(3) + p.e_a * at(4);
        f[static_cast<std::size_t>(j)] = at(0) * g;
    }
    return f;
}

State random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(rng), u(rng), u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("vector field matches the written-out equations") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const Params p = testing::random_params(rng);
        const State x = random_state(rng);
        const State a = vector_field(p, x), b = field_by_hand(p, x);
        for (std::size_t j = 0; j < 5; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-13));
    }
}

TEST_CASE("Jacobian agrees with central differences") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const Params p = testing::random_params(rng);
        const State x = random_state(rng);
        const Matrix5 J = jacobian(p, x);
        const double h = 1e-6;
        for (std::size_t k = 0; k < 5; ++k) {
            State xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            const State fp = field_by_hand(p, xp), fm = field_by_hand(p, xm);
            for (std::size_t j = 0; j < 5; ++j) CHECK(J[j][k] == doctest::Approx((fp[j] - fm[j]) / (2 * h)).epsilon(1e-7));
        }
    }
}

TEST_CASE("rho shifts components and has order five") {
    const State x{1, 2, 3, 4, 5};
    CHECK(rotate(x) == State{5, 1, 2, 3, 4});
    CHECK(rotate(x, 5) == x);
    CHECK(rotate(x, -1) == State{2, 3, 4, 5, 1});
}

TEST_CASE("vector field is rho-equivariant") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const Params p = testing::random_params(rng);
        const State x = random_state(rng);
        const State a = vector_field(p, rotate(x)), b = rotate(vector_field(p, x));
        for (std::size_t j = 0; j < 5; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-14));
    }
}

TEST_CASE("axis equilibria: radial -1 plus the four transverse rates") {
    const Params p{1.2, 1.0, 1.0, 0.8};
    for (int j = 1; j <= 5; ++j) {
        const Equilibrium e = xi_axis(p, j);
        CHECK(e.coords == axis_point(j));
        const std::vector<std::complex<double>> expected{-1.0, p.e_a, -p.c_b, p.e_b, -p.c_a};
        CHECK(testing::multiset_distance({e.eigenvalues.begin(), e.eigenvalues.end()}, expected) < 1e-14);
        CHECK(testing::multiset_distance({e.eigenvalues.begin(), e.eigenvalues.end()},
                                         testing::eigenvalues(testing::to_eigen(jacobian(p, e.coords)))) < 1e-12);
    }
    CHECK_THROWS_AS(xi_axis(p, 0), std::invalid_argument);
    CHECK_THROWS_AS(xi_axis(p, 6), std::invalid_argument);
}

TEST_CASE("interior equilibrium") {
    const Params p{1.2, 1.0, 1.0, 0.8};
    CHECK(xi_q_coordinate(p) == doctest::Approx(5.0 / 27.0).epsilon(1e-15));
    const Equilibrium q = xi_q(p);
    const State f = field_by_hand(p, q.coords);
    for (double v : f) CHECK(std::abs(v) < 1e-15);
    // e_A + e_B >= 5 + c_A + c_B leaves the positive orthant.
    CHECK_THROWS_AS(xi_q_coordinate({0.1, 0.1, 3.0, 3.0}), DomainError);
}

TEST_CASE("circulant eigenvalues match a dense eigensolver") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        const Params p = testing::random_params(rng);
        const XiQSpectrum s = xi_q_eigenvalues(p);
        const auto dense = testing::eigenvalues(testing::to_eigen(jacobian(p, xi_q(p).coords)));
        CHECK(testing::multiset_distance({s.mu.begin(), s.mu.end()}, dense) < 1e-9);
        CHECK(s.radial_index == 4);
        CHECK(std::abs(s.mu[4] - std::complex<double>(-1.0)) < 1e-14);
        CHECK(s.re_mu1 == doctest::Approx(s.mu[0].real()));
        CHECK(s.re_mu2 == doctest::Approx(s.mu[1].real()));
        // Conjugate pairs: mu_4 = conj(mu_1), mu_3 = conj(mu_2).
        CHECK(std::abs(s.mu[3] - std::conj(s.mu[0])) < 1e-13);
        CHECK(std::abs(s.mu[2] - std::conj(s.mu[1])) < 1e-13);
    }
}

TEST_CASE("stability margins") {
    const double beta = hopf_beta();
    CHECK(beta == doctest::Approx((std::sqrt(5.0) + 1) / (std::sqrt(5.0) - 1)));
    CHECK(beta == doctest::Approx(std::numbers::phi * std::numbers::phi));
    CHECK(xi_q_stable({1.2, 1.0, 1.0, 0.8}) == Stability::unstable);
    CHECK(xi_q_stable({0.8, 0.55, 1.0, 0.8}) == Stability::stable);
    CHECK(xi_q_stable({0.89, 0.5, 1.0, 0.8}) == Stability::unstable);
    // On the boundary beta (e_A - c_A) = e_B - c_B.
    CHECK(xi_q_stable({0.89, 0.8 - 0.11 * beta, 1.0, 0.8}) == Stability::boundary);
    CHECK(xi_q_stable({0.89, 0.8 - 0.11 / beta, 1.0, 0.8}) == Stability::boundary);

    // The margins change sign exactly where the leading real part does.
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const Params p = testing::random_params(rng, 0.3, 1.5);
        const auto mg = xi_q_margins(p);
        if (std::min(std::abs(mg[0]), std::abs(mg[1])) < 1e-6) continue;
        const XiQSpectrum s = xi_q_eigenvalues(p);
        const bool stable = std::max(s.re_mu1, s.re_mu2) < 0;
        CHECK(stable == (xi_q_stable(p) == Stability::stable));
        ++checked;
    }
    CHECK(checked > 300);
}

TEST_CASE("three-species equilibrium") {
    const Params p{0.8, 0.9, 1.0, 0.8};
    const Equilibrium t = xi_t(p);
    CHECK(t.coords[3] == 0.0);
    CHECK(t.coords[4] == 0.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(t.coords[j] > 0);
    for (double v : field_by_hand(p, t.coords)) CHECK(std::abs(v) < 1e-14);
    CHECK(testing::multiset_distance({t.eigenvalues.begin(), t.eigenvalues.end()},
                                     testing::eigenvalues(testing::to_eigen(jacobian(p, t.coords)))) < 1e-10);
    for (int r = 0; r < 5; ++r) {
        const Equilibrium tr = xi_t(p, r);
        CHECK(tr.coords == rotate(t.coords, r));
        for (double v : field_by_hand(p, tr.coords)) CHECK(std::abs(v) < 1e-14);
    }

    // Wherever it exists, it is a zero of the field with positive coordinates.
    std::mt19937_64 rng(6);
    int found = 0;
    for (int i = 0; i < 200; ++i) {
        const Params q = testing::random_params(rng);
        try {
            const Equilibrium tq = xi_t(q);
            for (std::size_t j = 0; j < 3; ++j) CHECK(tq.coords[j] > 0);
            for (double v : field_by_hand(q, tq.coords)) CHECK(std::abs(v) < 1e-12);
            ++found;
        } catch (const DomainError&) {
        }
    }
    CHECK(found > 20);
}

TEST_CASE("derived quantities") {
    const Params p{1.2, 1.0, 1.0, 0.8};
    const DerivedQuantities d = derived_quantities(p);
    CHECK(d.delta_t == doctest::Approx(1.44 / 0.8));
    CHECK(d.nu_4 == doctest::Approx(-1.0 + 1.44 + 1.2 / 0.8));
    CHECK(d.nu_5 == doctest::Approx(-1.0 - 1.44 + 1.2 * 0.8));
    CHECK(d.sufficient_condition == false);
    CHECK(sufficient_condition({1.2, 1.1, 1.0, 0.8}));
    CHECK(derived_quantities({1, 1, 1, 1}).delta_t == 1.0);

    const Params s{0.8, 0.9, 1.0, 0.8};
    const DerivedQuantities ds = derived_quantities(s);
    REQUIRE(ds.lambda_4);
    REQUIRE(ds.lambda_5);
    const State x = xi_t(s).coords;
    const double X = x[0] + x[1] + x[2];
    CHECK(*ds.lambda_4 == doctest::Approx(1 - X + s.e_b * x[0] - s.c_b * x[1] + s.e_a * x[2]));
    CHECK(*ds.lambda_5 == doctest::Approx(1 - X - s.c_a * x[0] + s.e_b * x[1] - s.c_b * x[2]));
    REQUIRE(ds.delta_tq);
    CHECK(*ds.delta_tq == doctest::Approx(-*ds.lambda_4 / *ds.lambda_5));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((Params{-1, 1, 1, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Params{1, 0, 1, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Params{1, 1, std::nan(""), 1}.validate()), std::invalid_argument);
    CHECK_NOTHROW(Params{}.validate());
}

}
