#include "fracmech/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace fracmech::similarity {

SimilarityExponents exponents(double alpha, double beta_degree) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (1, 2]");
    if (beta_degree == 0.0 || !std::isfinite(beta_degree)) {
        throw DomainError("potential degree must be nonzero");
    }
    return {1.0 - beta_degree + beta_degree / alpha, beta_degree - beta_degree / alpha, beta_degree,
            1.0 / alpha + 1.0 / beta_degree - 1.0};
}

double kepler_gamma(double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (1, 2]");
    return alpha / (2.0 * (alpha - 1.0));
}

Trajectory scale_trajectory(const Trajectory& traj, double rho, double alpha, double beta_degree) {
    if (!(rho > 0.0)) throw DomainError("scale factor must be positive");
    const SimilarityExponents ex = exponents(alpha, beta_degree);
    return traj.rescaled(std::pow(rho, ex.time_vs_length), rho, std::pow(rho, beta_degree / alpha),
                         std::pow(rho, ex.energy_vs_length));
}

InitialConditions scale_initial_conditions(const FractionalParams& params,
                                           const InitialConditions& ic, double rho,
                                           double beta_degree) {
    if (!(rho > 0.0)) throw DomainError("scale factor must be positive");
    const SimilarityExponents ex = exponents(params.alpha(), beta_degree);
    const Vec qdot = ic.qdot0 ? *ic.qdot0 : velocity_from_momentum(params, ic.momentum(params));
    const Vec scaled_qdot = qdot * std::pow(rho, ex.velocity_vs_length);
    return InitialConditions::with_momentum(ic.q0 * rho, momentum_from_velocity(params, scaled_qdot));
}

namespace {

Landmark resolve(Landmark requested, const PowerLawPotential& pot) {
    if (requested != Landmark::Auto) return requested;
    if (pot.strength() > 0.0 && pot.degree() > 1.0) return Landmark::TurningPoint;
    if (pot.strength() > 0.0 && pot.degree() > 0.0) return Landmark::OriginCrossing;
    return Landmark::RadiusFraction;
}

// Rough time for the state to traverse its own length scale.
double traverse_time(const FractionalParams& params, const PowerLawPotential& pot,
                     const PhaseState& start) {
    const Scales s = derive_scales(params, pot, start, 1.0);
    const double speed = velocity_from_momentum(params, Vec{s.p})[0];
    return s.q / speed;
}

template <typename Fn>
auto fan_out(std::span<const double> rho_list, Fn fn) {
    using Result = decltype(fn(1.0));
    std::vector<std::future<Result>> jobs;
    jobs.reserve(rho_list.size());
    for (double rho : rho_list) jobs.push_back(std::async(std::launch::async, fn, rho));
    std::vector<Result> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

}  // namespace

double landmark_time(const FractionalParams& params, const PowerLawPotential& pot,
                     const InitialConditions& ic, const IntegratorConfig& cfg, ScalingOptions opts) {
    const PhaseState start = ic.state(params);
    const Landmark landmark = resolve(opts.landmark, pot);

    IntegratorConfig run = cfg;
    run.detect_turning_points = landmark == Landmark::TurningPoint;
    run.detect_origin_crossings = landmark == Landmark::OriginCrossing;
    switch (landmark) {
        case Landmark::TurningPoint:
            run.stop = StopRule{EventKind::TurningPoint, 0, 1};
            break;
        case Landmark::OriginCrossing:
            run.stop = StopRule{EventKind::OriginCrossing, 0, 1};
            break;
        default: {
            const double target = opts.radius_fraction * start.q.norm();
            if (!(target > 0.0)) throw DomainError("radius landmark needs q0 != 0");
            run.custom_event = [target](const PhaseState& s) { return s.q.norm() - target; };
            run.stop = StopRule{EventKind::Custom, 0, 1};
            break;
        }
    }

    double horizon = 50.0 * traverse_time(params, pot, start);
    for (int attempt = 0; attempt < 8; ++attempt, horizon *= 4.0) {
        const auto result = integrate(params, pot, ic, 0.0, horizon, run);
        if (result.stopped_by_rule) return result.events.back().time;
    }
    throw UnsuitablePhysics("landmark never reached; motion does not return to a corresponding point");
}

std::vector<ScalingRow> verify_scaling(const FractionalParams& params, const PowerLawPotential& pot,
                                       const InitialConditions& ic, std::span<const double> rho_list,
                                       const IntegratorConfig& cfg, ScalingOptions opts) {
    const double tau = exponents(params.alpha(), pot.degree()).time_vs_length;
    const double reference = landmark_time(params, pot, ic, cfg, opts);
    const auto times = fan_out(rho_list, [&](double rho) {
        return landmark_time(params, pot, scale_initial_conditions(params, ic, rho, pot.degree()),
                             cfg, opts);
    });
    std::vector<ScalingRow> rows;
    for (std::size_t i = 0; i < rho_list.size(); ++i) {
        const double predicted = std::pow(rho_list[i], tau);
        const double measured = times[i] / reference;
        rows.push_back({rho_list[i], times[i], predicted, measured,
                        std::abs(measured - predicted) / predicted});
    }
    return rows;
}

std::optional<LogLogFit> fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("fit needs equally many x and y values");
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive data");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    if (n < 2) return std::nullopt;
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0) return std::nullopt;
    LogLogFit fit{sxy / sxx, 0.0, 0.0, n};
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(y[i]) - (fit.intercept + fit.slope * std::log(x[i]));
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

InitialConditions default_kepler_orbit(const FractionalParams& params, const PowerLawPotential& pot) {
    if (!(pot.strength() < 0.0) || pot.degree() != -1.0) {
        throw DomainError("Kepler orbits need an attractive potential of degree -1");
    }
    // Circular orbit at r = 1: k / r = alpha D |p|^alpha.
    const double k = -pot.strength();
    const double p_circ = std::pow(k / (params.alpha() * params.d_alpha()), 1.0 / params.alpha());
    return InitialConditions::with_momentum(Vec{1.0, 0.0}, Vec{0.0, 0.8 * p_circ});
}

void validate_orbit(const FractionalParams& params, const PowerLawPotential& pot,
                    const InitialConditions& ic) {
    if (!(pot.strength() < 0.0) || pot.degree() != -1.0) {
        throw DomainError("Kepler check needs strength < 0 and degree -1");
    }
    if (ic.dim() != 2) throw DomainError("Kepler check runs on planar (2-component) states");
    const PhaseState s = ic.state(params);
    if (s.q.norm() == 0.0) throw UnsuitablePhysics("orbit starts at the attracting centre");
    const double energy = hamiltonian(params, pot, s);
    if (!(energy < 0.0)) {
        throw UnsuitablePhysics("orbit is unbound (E >= 0); no radial period exists");
    }
    const double ang = s.q[0] * s.p[1] - s.q[1] * s.p[0];
    if (std::abs(ang) <= 1e-12 * s.q.norm() * std::max(s.p.norm(), 1e-300)) {
        throw UnsuitablePhysics("orbit has zero angular momentum and falls into the centre");
    }
}

double radial_period(const FractionalParams& params, const PowerLawPotential& pot,
                     const InitialConditions& ic, const IntegratorConfig& cfg) {
    validate_orbit(params, pot, ic);
    IntegratorConfig run = cfg;
    run.detect_turning_points = false;
    run.detect_origin_crossings = false;
    run.custom_event = [](const PhaseState& s) { return s.q.dot(s.p); };
    run.stop = StopRule{EventKind::Custom, +1, 2};

    double horizon = 200.0 * traverse_time(params, pot, ic.state(params));
    for (int attempt = 0; attempt < 6; ++attempt, horizon *= 4.0) {
        const auto result = integrate(params, pot, ic, 0.0, horizon, run);
        if (!result.stopped_by_rule) continue;
        std::vector<double> peri;
        for (const auto& ev : result.events) {
            if (ev.kind == EventKind::Custom && ev.direction == +1) peri.push_back(ev.time);
        }
        return peri.at(1) - peri.at(0);
    }
    throw UnsuitablePhysics("orbit shows no recurrent pericentre passages");
}

KeplerReport fractional_kepler_check(const FractionalParams& params, const PowerLawPotential& pot,
                                     const InitialConditions& ic, std::span<const double> rho_list,
                                     const IntegratorConfig& cfg) {
    validate_orbit(params, pot, ic);
    KeplerReport report{params.alpha(), exponents(params.alpha(), -1.0).time_vs_length, {}, {}};
    const double reference = radial_period(params, pot, ic, cfg);
    const auto periods = fan_out(rho_list, [&](double rho) {
        return radial_period(params, pot, scale_initial_conditions(params, ic, rho, -1.0), cfg);
    });
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < rho_list.size(); ++i) {
        const double predicted = std::pow(rho_list[i], report.predicted_exponent);
        const double measured = periods[i] / reference;
        report.rows.push_back({rho_list[i], periods[i], measured, predicted,
                               std::abs(measured - predicted) / predicted});
        x.push_back(rho_list[i]);
        y.push_back(periods[i]);
    }
    report.fit = fit_loglog(x, y);
    return report;
}

}  // namespace fracmech::similarity
