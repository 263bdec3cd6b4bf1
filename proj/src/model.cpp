#include "hetnet/model.hpp"

#include "hetnet/error.hpp"
#include "hetnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hetnet {

void Params::validate() const {
    const double v[4] = {c_a, c_b, e_a, e_b};
    const char* names[4] = {"c_A", "c_B", "e_A", "e_B"};
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(v[i]) || v[i] <= 0.0)
            throw std::invalid_argument(std::string(names[i]) + " must be a positive finite number");
}

State rotate(const State& x, int k) {
    const int n = static_cast<int>(kSpecies);
    const int shift = ((k % n) + n) % n;
    State r{};
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>((i + shift) % n)] = x[static_cast<std::size_t>(i)];
    return r;
}

double total(const State& x) {
    // Summed in sorted order so that the result, and everything built on it,
    // is bitwise invariant under rho.
    State v = x;
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double c : v) s += c;
    return s;
}

double interaction(const Params& p, int k) {
    switch (((k % 5) + 5) % 5) {
        case 1: return -p.c_a;
        case 2: return p.e_b;
        case 3: return -p.c_b;
        case 4: return p.e_a;
        default: return 0.0;
    }
}

State growth_rates(const Params& p, const State& x) {
    const double X = total(x);
    State g{};
    for (std::size_t j = 0; j < kSpecies; ++j) {
        double acc = 1.0 - X;
        for (int k = 1; k < 5; ++k) acc += interaction(p, k) * x[(j + static_cast<std::size_t>(k)) % kSpecies];
        g[j] = acc;
    }
    return g;
}

State vector_field(const Params& p, const State& x) {
    const State g = growth_rates(p, x);
    State f{};
    for (std::size_t j = 0; j < kSpecies; ++j) f[j] = x[j] * g[j];
    return f;
}

Matrix5 jacobian(const Params& p, const State& x) {
    const State g = growth_rates(p, x);
    Matrix5 J{};
    for (std::size_t j = 0; j < kSpecies; ++j) {
        for (std::size_t k = 0; k < kSpecies; ++k) {
            const int offset = static_cast<int>((k + kSpecies - j) % kSpecies);
            J[j][k] = x[j] * (-1.0 + interaction(p, offset));
        }
        J[j][j] += g[j];
    }
    return J;
}

State axis_point(int j) {
    if (j < 1 || j > 5) throw std::invalid_argument("axis index must be in 1..5");
    State x{};
    x[static_cast<std::size_t>(j - 1)] = 1.0;
    return x;
}

Equilibrium xi_axis(const Params& p, int j) {
    Equilibrium e;
    e.kind = Equilibrium::Kind::axis;
    e.index = j;
    e.coords = axis_point(j);
    // Jacobian is diagonal apart from row j, so its eigenvalues are the diagonal.
    const Matrix5 J = jacobian(p, e.coords);
    for (std::size_t i = 0; i < kSpecies; ++i) e.eigenvalues[i] = J[i][i];
    return e;
}

double xi_q_coordinate(const Params& p) {
    const double denom = 5.0 + p.c_a + p.c_b - p.e_a - p.e_b;
    if (!(denom > 0.0)) throw DomainError("no interior equilibrium in the positive orthant");
    return 1.0 / denom;
}

XiQSpectrum xi_q_eigenvalues(const Params& p) {
    const double x = xi_q_coordinate(p);
    XiQSpectrum s;
    // Circulant first row at xi_Q: x * (-1, -(1+c_A), -(1-e_B), -(1+c_B), -(1-e_A)).
    const double row[5] = {1.0, 1.0 + p.c_a, 1.0 - p.e_b, 1.0 + p.c_b, 1.0 - p.e_a};
    for (int j = 1; j <= 5; ++j) {
        const std::complex<double> w = std::polar(1.0, 2.0 * std::numbers::pi * j / 5.0);
        std::complex<double> acc = 0.0;
        std::complex<double> wk = 1.0;
        for (double r : row) {
            acc += r * wk;
            wk *= w;
        }
        s.mu[static_cast<std::size_t>(j - 1)] = -x * acc;
    }
    // omega = 1 gives exactly -x(5 + c_A + c_B - e_A - e_B) = -1.
    s.mu[4] = -1.0;
    s.radial_index = 4;
    const double c72 = std::cos(2.0 * std::numbers::pi / 5.0);
    const double c36 = std::cos(std::numbers::pi / 5.0);
    s.re_mu1 = -x * ((p.c_a - p.e_a) * c72 - (p.c_b - p.e_b) * c36);
    s.re_mu2 = -x * ((p.c_b - p.e_b) * c72 - (p.c_a - p.e_a) * c36);
    return s;
}

Equilibrium xi_q(const Params& p) {
    const double x = xi_q_coordinate(p);
    Equilibrium e;
    e.kind = Equilibrium::Kind::interior5;
    e.coords.fill(x);
    e.eigenvalues = xi_q_eigenvalues(p).mu;
    return e;
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::boundary: return "boundary";
    }
    return "?";
}

double hopf_beta() {
    const double r5 = std::sqrt(5.0);
    return (r5 + 1.0) / (r5 - 1.0);
}

std::array<double, 2> xi_q_margins(const Params& p) {
    const double b = hopf_beta();
    const double da = p.e_a - p.c_a;
    const double db = p.e_b - p.c_b;
    return {b * db - da, b * da - db};
}

Stability xi_q_stable(const Params& p, double tol) {
    xi_q_coordinate(p);
    const auto m = xi_q_margins(p);
    if (m[0] < -tol || m[1] < -tol) return Stability::unstable;
    if (m[0] <= tol || m[1] <= tol) return Stability::boundary;
    return Stability::stable;
}

namespace {

Vec3 xi_t_plane(const Params& p) {
    // Zero growth of x1, x2, x3 with x4 = x5 = 0.
    const Mat3 m = Mat3::from_rows({1.0, 1.0 + p.c_a, 1.0 - p.e_b},
                                   {1.0 - p.e_a, 1.0, 1.0 + p.c_a},
                                   {1.0 + p.c_b, 1.0 - p.e_a, 1.0});
    Vec3 x;
    try {
        x = solve(m, {1.0, 1.0, 1.0});
    } catch (const NumericalError&) {
        throw DomainError("xi_T is not an isolated equilibrium for these parameters");
    }
    for (double v : x)
        if (!(v > 0.0)) throw DomainError("xi_T not in the positive orthant");
    return x;
}

}  // namespace

Equilibrium xi_t(const Params& p, int rotation) {
    const Vec3 x = xi_t_plane(p);
    Equilibrium e;
    e.kind = Equilibrium::Kind::interior3;
    e.index = ((rotation % 5) + 5) % 5;
    const State base{x[0], x[1], x[2], 0.0, 0.0};

    // Block-triangular Jacobian: the in-plane 3x3 block plus the two
    // transverse growth rates.
    const Matrix5 J = jacobian(p, base);
    Mat3 block;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) block(i, k) = J[i][k];
    const auto roots = cubic_roots(-trace(block), principal_minor_sum(block), -determinant(block));
    e.eigenvalues = {roots[0], roots[1], roots[2], J[3][3], J[4][4]};
    e.coords = rotate(base, e.index);
    return e;
}

bool sufficient_condition(const Params& p) {
    return std::min(p.c_a, p.c_b) > std::max(p.e_a, p.e_b);
}

DerivedQuantities derived_quantities(const Params& p) {
    DerivedQuantities d;
    d.delta_t = p.c_a * p.c_a * p.c_b / (p.e_a * p.e_a * p.e_b);
    d.nu_4 = -p.c_b + p.c_a * p.c_a / p.e_a + p.c_a * p.e_a / p.e_b;
    d.nu_5 = -p.c_b - p.c_a * p.c_a / p.e_a + p.c_a * p.c_b * p.e_b / (p.e_a * p.e_a);
    d.beta = hopf_beta();
    d.sufficient_condition = sufficient_condition(p);
    try {
        d.mu = xi_q_eigenvalues(p);
    } catch (const DomainError&) {
    }
    try {
        const Vec3 x = xi_t_plane(p);
        const double X = x[0] + x[1] + x[2];
        const double l4 = 1.0 - X + p.e_b * x[0] - p.c_b * x[1] + p.e_a * x[2];
        const double l5 = 1.0 - X - p.c_a * x[0] + p.e_b * x[1] - p.c_b * x[2];
        d.lambda_4 = l4;
        d.lambda_5 = l5;
        if (l5 != 0.0) d.delta_tq = -l4 / l5;
    } catch (const DomainError&) {
    }
    return d;
}

}  // namespace hetnet
