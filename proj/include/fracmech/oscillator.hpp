#pragma once

// Fractional 1D oscillator H = D_alpha |p|^alpha + g^2 |q|^beta,
// 1 < alpha, beta <= 2: closed-form period, quadrature period,
// Hamilton-Jacobi time of flight t(q) and its inversion q(t).

#include <cstddef>
#include <optional>

#include "fracmech/integrate.hpp"
#include "fracmech/model_core.hpp"

namespace fracmech::oscillator {

class OscillatorSpec {
public:
    OscillatorSpec(FractionalParams params, PowerLawPotential pot, double energy);

    [[nodiscard]] const FractionalParams& params() const { return params_; }
    [[nodiscard]] const PowerLawPotential& pot() const { return pot_; }
    [[nodiscard]] double energy() const { return energy_; }

    [[nodiscard]] double alpha() const { return params_.alpha(); }
    [[nodiscard]] double beta() const { return pot_.degree(); }
    [[nodiscard]] double g2() const { return pot_.strength(); }

    [[nodiscard]] double turning_point() const;
    /// Largest momentum, reached at q = 0.
    [[nodiscard]] double max_momentum() const;
    /// E^((1/alpha + 1/beta) - 1) / (alpha beta D^(1/alpha) (g^2)^(1/beta)),
    /// the factor shared by the period and the time of flight.
    [[nodiscard]] double time_scale() const;

    [[nodiscard]] OscillatorSpec with_energy(double energy) const;

private:
    FractionalParams params_;
    PowerLawPotential pot_;
    double energy_;
};

/// T = 4 * time_scale * B(1/beta, 1/alpha).
double period(const OscillatorSpec& spec);

/// Same period with the Beta integral done by adaptive quadrature after
/// removing both endpoint singularities; does not touch specfun.
double period_quadrature(const OscillatorSpec& spec);

/// int_0^1 z^(1/beta - 1) (1 - z)^(1/alpha - 1) dz by quadrature.
double beta_integral_quadrature(double alpha, double beta);

/// t + delta for a particle launched from q = 0 with positive velocity:
/// time_scale * B_{q^beta g^2 / E}(1/beta, 1/alpha), q in [0, q_turn].
double hj_time_of_flight(const OscillatorSpec& spec, double q);

/// Same quantity through the hypergeometric form
/// E^(1/alpha - 1) / (alpha D^(1/alpha)) q F(1/beta, 1 - 1/alpha; 1/beta + 1; q^beta g^2 / E).
double hj_time_of_flight_hypergeometric(const OscillatorSpec& spec, double q);

/// Inverse of hj_time_of_flight on the first quarter period.
double hj_position(const OscillatorSpec& spec, double t);

/// q(t) over all t: q(-delta) = 0 ascending, reflected about the turning
/// points and the origin, period T.
double hj_trajectory(const OscillatorSpec& spec, double t, double delta = 0.0);

/// Fractional quantum oscillator levels
/// E_n = (pi hbar beta D^(1/alpha) (g^2)^(1/beta) / (2 B(1/beta, 1/alpha + 1)))^(ab/(a+b)) (n + 1/2)^(ab/(a+b)).
double quantum_levels(const FractionalParams& params, const PowerLawPotential& pot, double hbar,
                      std::size_t n);

/// Harmonic limit q(t) = sqrt(2E/(m w^2)) sin(w (t + delta)), w = sqrt(2/m) g.
double classical_limit_solution(double energy, double mass, double g, double delta, double t);

struct PeriodReport {
    double closed_form = 0.0;
    double quadrature = 0.0;
    std::optional<double> ode_measured;
    double max_pairwise_rel_diff = 0.0;

    [[nodiscard]] bool consistent(double tol) const { return max_pairwise_rel_diff <= tol; }
};

/// All three period routes; the ODE measurement is skipped when cfg is empty.
PeriodReport period_report(const OscillatorSpec& spec,
                           const std::optional<IntegratorConfig>& cfg = IntegratorConfig{});

}  // namespace fracmech::oscillator
