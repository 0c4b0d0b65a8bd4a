#pragma once

// Mechanical similarity for homogeneous potentials: if q -> rho q, the
// fractional equations of motion are unchanged when t -> rho^(1 - beta + beta/alpha) t.
// This module predicts the resulting power laws and measures them.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracmech/integrate.hpp"
#include "fracmech/model_core.hpp"
#include "fracmech/trajectory.hpp"

namespace fracmech::similarity {

struct SimilarityExponents {
    double time_vs_length;      // 1 - beta + beta/alpha
    double velocity_vs_length;  // beta - beta/alpha
    double energy_vs_length;    // beta
    double time_vs_energy;      // 1/alpha + 1/beta - 1
};

SimilarityExponents exponents(double alpha, double beta_degree);

/// Degree -gamma of the potential for which T^2 ~ l^3 survives alpha-kinetics.
double kepler_gamma(double alpha);

/// q' = rho q, t' = rho^(time exponent) t, p' = rho^(beta/alpha) p
/// (the momentum of the scaled velocity), E' = rho^beta E.
Trajectory scale_trajectory(const Trajectory& traj, double rho, double alpha, double beta_degree);

/// q0 -> rho q0, qdot0 -> rho^(beta - beta/alpha) qdot0; always returns momentum form.
InitialConditions scale_initial_conditions(const FractionalParams& params,
                                           const InitialConditions& ic, double rho,
                                           double beta_degree);

enum class Landmark {
    Auto,            // turning point if bounded oscillator, origin crossing for
                     // 0 < degree <= 1, radius fraction otherwise
    TurningPoint,    // first momentum sign change
    OriginCrossing,  // first position sign change
    RadiusFraction,  // first time |q| crosses fraction * |q0|
};

struct ScalingOptions {
    Landmark landmark = Landmark::Auto;
    double radius_fraction = 0.5;
};

struct ScalingRow {
    double rho;
    double landmark_time;
    double predicted_ratio;
    double measured_ratio;
    double rel_error;
};

/// Time to reach the landmark at every scale, compared with rho^(1 - beta + beta/alpha).
/// The reference time is always measured at rho = 1.
std::vector<ScalingRow> verify_scaling(const FractionalParams& params, const PowerLawPotential& pot,
                                       const InitialConditions& ic, std::span<const double> rho_list,
                                       const IntegratorConfig& cfg = {}, ScalingOptions opts = {});

/// Time of the landmark event for one initial condition.
double landmark_time(const FractionalParams& params, const PowerLawPotential& pot,
                     const InitialConditions& ic, const IntegratorConfig& cfg,
                     ScalingOptions opts = {});

struct LogLogFit {
    double slope;
    double intercept;
    double residual_rms;
    std::size_t points;
};

/// Least-squares line through (ln x, ln y); empty with fewer than two distinct x.
std::optional<LogLogFit> fit_loglog(std::span<const double> x, std::span<const double> y);

struct KeplerRow {
    double rho;
    double radial_period;
    double measured_ratio;
    double predicted_ratio;
    double rel_error;
};

struct KeplerReport {
    double alpha;
    double predicted_exponent;  // 2 - 1/alpha
    std::vector<KeplerRow> rows;
    std::optional<LogLogFit> fit;
};

/// Planar bound orbit in V = strength/|q| (strength < 0): 20% below the
/// circular momentum at q = (1, 0), so the start is the apocentre.
InitialConditions default_kepler_orbit(const FractionalParams& params, const PowerLawPotential& pot);

/// Throws UnsuitablePhysics unless the orbit is bound (E < 0) and has
/// nonzero angular momentum; DomainError for a wrong potential or dimension.
void validate_orbit(const FractionalParams& params, const PowerLawPotential& pot,
                    const InitialConditions& ic);

/// Time between successive pericentre passages (q.p changing sign - to +).
double radial_period(const FractionalParams& params, const PowerLawPotential& pot,
                     const InitialConditions& ic, const IntegratorConfig& cfg = {});

/// Radial periods of similarity-scaled orbits against rho^(2 - 1/alpha).
KeplerReport fractional_kepler_check(const FractionalParams& params, const PowerLawPotential& pot,
                                     const InitialConditions& ic, std::span<const double> rho_list,
                                     const IntegratorConfig& cfg = {});

}  // namespace fracmech::similarity
