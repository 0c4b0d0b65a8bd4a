#pragma once

// Pointwise mechanics of a particle with fractional kinetic energy
// D_alpha |p|^alpha in a homogeneous power-law potential s |q|^degree.
//
// Units are whatever consistent system the caller picks (CGS in the
// original formulation: D_alpha in erg^(1-alpha) cm^alpha s^-alpha).

#include <cstddef>
#include <functional>
#include <optional>

#include "fracmech/vec.hpp"

namespace fracmech {

/// |x|^k with 0^k handled explicitly (0 for k > 0, 1 for k == 0, +inf for k < 0).
double abs_pow(double x, double k);

/// sgn with sgn(0) = 0.
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Kinetic-term parameters: exponent alpha in (1, 2] and scale D_alpha > 0.
class FractionalParams {
public:
    FractionalParams(double alpha, double d_alpha);

    /// Classical limit alpha = 2 with D_2 = 1/(2m).
    static FractionalParams from_mass(double mass);

    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double d_alpha() const { return d_alpha_; }

    /// Kinetic energy D_alpha |p|^alpha.
    [[nodiscard]] double kinetic(const Vec& p) const;

private:
    double alpha_;
    double d_alpha_;
};

/// V(q) = strength * |q|^degree with |.| the Euclidean norm.
///
/// The strength carries its sign (negative for attractive 1/r wells);
/// the fractional oscillator additionally needs strength = g^2 > 0 and
/// 1 < degree <= 2, checked by require_oscillator().
class PowerLawPotential {
public:
    PowerLawPotential(double strength, double degree);

    [[nodiscard]] double strength() const { return strength_; }
    [[nodiscard]] double degree() const { return degree_; }

    [[nodiscard]] double value(const Vec& q) const;
    /// dV/dq; zero at the origin for degree > 1, DomainError there otherwise.
    [[nodiscard]] Vec gradient(const Vec& q) const;

    [[nodiscard]] bool is_oscillator() const;
    void require_oscillator() const;

private:
    double strength_;
    double degree_;
};

struct PhaseState {
    double t = 0.0;
    Vec q;
    Vec p;

    [[nodiscard]] std::size_t dim() const { return q.size(); }
};

/// Throws DomainError unless q and p share a dimension in {1, 2, 3}.
void validate(const PhaseState& state);

/// Starting point of a run: position plus exactly one of velocity or momentum.
struct InitialConditions {
    Vec q0;
    std::optional<Vec> qdot0;
    std::optional<Vec> p0;

    static InitialConditions with_momentum(Vec q0, Vec p0);
    static InitialConditions with_velocity(Vec q0, Vec qdot0);

    [[nodiscard]] std::size_t dim() const { return q0.size(); }
    /// Momentum at t0, converting a supplied velocity through the Legendre map.
    [[nodiscard]] Vec momentum(const FractionalParams& params) const;
    [[nodiscard]] PhaseState state(const FractionalParams& params, double t0 = 0.0) const;
};

struct PhaseRate {
    Vec qdot;
    Vec pdot;
};

using ScalarField = std::function<double(const PhaseState&)>;

/// Central-difference step h = max(abs, rel*|x|) used by the bracket helpers.
struct DiffStep {
    double abs = 1e-6;
    double rel = 1e-6;

    [[nodiscard]] double at(double x) const;
};

double hamiltonian(const FractionalParams& params, const PowerLawPotential& pot,
                   const PhaseState& state);

/// L = (1/(alpha D))^(1/(alpha-1)) (alpha-1)/alpha |qdot|^(alpha/(alpha-1)) - V(q).
double lagrangian(const FractionalParams& params, const PowerLawPotential& pot,
                  const Vec& q, const Vec& qdot);

Vec momentum_from_velocity(const FractionalParams& params, const Vec& qdot);
Vec velocity_from_momentum(const FractionalParams& params, const Vec& p);

/// Hamilton equations: qdot = dH/dp, pdot = -dV/dq.
PhaseRate hamilton_rhs(const FractionalParams& params, const PowerLawPotential& pot,
                       const PhaseState& state);

/// Left-hand side of the 1D Lagrangian equation of motion,
/// (1/(alpha D))^(1/(alpha-1)) / (alpha-1) * qddot * |qdot|^((2-alpha)/(alpha-1)) + V'(q).
/// Singular at qdot = 0 for alpha < 2.
double euler_lagrange_residual(const FractionalParams& params, const PowerLawPotential& pot,
                               double q, double qdot, double qddot);

/// {u, v} = du/dp . dv/dq - du/dq . dv/dp, numerically differentiated.
double poisson_bracket(const ScalarField& u, const ScalarField& v, const PhaseState& state,
                       DiffStep step = {});

/// Same ordering with the Hamiltonian as first argument and analytic dH/dp, dH/dq.
double poisson_bracket_with_hamiltonian(const FractionalParams& params,
                                        const PowerLawPotential& pot, const ScalarField& f,
                                        const PhaseState& state, DiffStep step = {});

/// df/dt = partial_t f + {H, f}.
double total_time_derivative(const ScalarField& f, const FractionalParams& params,
                             const PowerLawPotential& pot, const PhaseState& state,
                             DiffStep step = {});

/// |q| where s |q|^degree = E. Needs E > 0, s > 0, degree > 0.
double turning_point(const PowerLawPotential& pot, double energy);

struct FreeParticlePoint {
    double q;
    double p;
};

/// Analytic free-particle motion at energy E > 0 with phase constant delta.
FreeParticlePoint free_particle_trajectory(const FractionalParams& params, double energy,
                                           double delta, double t);

}  // namespace fracmech
