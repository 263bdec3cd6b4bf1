#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

namespace hetnet {

/// Competition (c) and expansion (e) rates of the five-species cyclic model.
struct Params {
    double c_a = 1.0;
    double c_b = 1.0;
    double e_a = 1.0;
    double e_b = 0.8;

    /// Throws std::invalid_argument unless all four rates are finite and > 0.
    void validate() const;
};

inline constexpr std::size_t kSpecies = 5;
using State = std::array<double, kSpecies>;
using Matrix5 = std::array<std::array<double, kSpecies>, kSpecies>;

/// rho(x1..x5) = (x5,x1,x2,x3,x4), applied k times (k may be negative).
State rotate(const State& x, int k = 1);
double total(const State& x);

/// Per-capita growth rates g_j, so that dx_j/dt = x_j g_j.
State growth_rates(const Params& p, const State& x);
State vector_field(const Params& p, const State& x);
Matrix5 jacobian(const Params& p, const State& x);

/// Interaction coefficient of x_{j+k} in g_j (excluding the -X term).
double interaction(const Params& p, int k);

struct Equilibrium {
    enum class Kind { axis, interior5, interior3 };
    Kind kind = Kind::axis;
    int index = 0;  ///< 1..5 for axis, rotation 0..4 for interior3, unused for interior5
    State coords{};
    std::array<std::complex<double>, kSpecies> eigenvalues{};
};

/// xi_j with x_j = 1, j in 1..5.
State axis_point(int j);
Equilibrium xi_axis(const Params& p, int j);

/// Coordinate of the fully interior equilibrium. Throws DomainError when it
/// does not lie in the positive orthant.
double xi_q_coordinate(const Params& p);
Equilibrium xi_q(const Params& p);

struct XiQSpectrum {
    /// mu[j-1] for omega_j = exp(2 pi i j/5), j = 1..5.
    std::array<std::complex<double>, kSpecies> mu{};
    /// Index into mu of the radial eigenvalue (omega = 1), which equals -1.
    std::size_t radial_index = 4;
    double re_mu1 = 0.0;
    double re_mu2 = 0.0;
};
XiQSpectrum xi_q_eigenvalues(const Params& p);

enum class Stability { stable, unstable, boundary };
std::string to_string(Stability s);

/// (√5+1)/(√5−1)
double hopf_beta();
/// The two margins beta(e_B-c_B)-(e_A-c_A) and beta(e_A-c_A)-(e_B-c_B);
/// xi_Q is stable when both are positive.
std::array<double, 2> xi_q_margins(const Params& p);
Stability xi_q_stable(const Params& p, double tol = 1e-12);

/// Interior equilibrium of the invariant plane {x4 = x5 = 0}, rotated by
/// rho^rotation. Throws DomainError when not all three coordinates are positive.
Equilibrium xi_t(const Params& p, int rotation = 0);

struct DerivedQuantities {
    double delta_t = 0.0;
    double nu_4 = 0.0;
    double nu_5 = 0.0;
    double beta = 0.0;
    std::optional<XiQSpectrum> mu;
    std::optional<double> lambda_4;
    std::optional<double> lambda_5;
    /// Empty when xi_T does not exist or lambda_5 = 0.
    std::optional<double> delta_tq;
    bool sufficient_condition = false;
};
DerivedQuantities derived_quantities(const Params& p);

/// min(c_A,c_B) > max(e_A,e_B)
bool sufficient_condition(const Params& p);

}  // namespace hetnet
