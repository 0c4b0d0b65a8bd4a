#include "fracmech/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracmech/quadrature.hpp"
#include "fracmech/specfun.hpp"

namespace fracmech::oscillator {

OscillatorSpec::OscillatorSpec(FractionalParams params, PowerLawPotential pot, double energy)
    : params_(params), pot_(pot), energy_(energy) {
    pot_.require_oscillator();
    if (!(energy > 0.0) || !std::isfinite(energy)) {
        throw DomainError("oscillator energy must be positive");
    }
}

double OscillatorSpec::turning_point() const { return fracmech::turning_point(pot_, energy_); }

double OscillatorSpec::max_momentum() const {
    return std::pow(energy_ / params_.d_alpha(), 1.0 / params_.alpha());
}

double OscillatorSpec::time_scale() const {
    const double a = alpha();
    const double b = beta();
    return std::pow(energy_, 1.0 / a + 1.0 / b - 1.0) /
           (a * b * std::pow(params_.d_alpha(), 1.0 / a) * std::pow(g2(), 1.0 / b));
}

OscillatorSpec OscillatorSpec::with_energy(double energy) const { return {params_, pot_, energy}; }

double period(const OscillatorSpec& spec) {
    return 4.0 * spec.time_scale() * specfun::beta(1.0 / spec.beta(), 1.0 / spec.alpha());
}

double beta_integral_quadrature(double alpha, double beta) {
    // z = u^beta on [0, 1/2] and 1 - z = v^alpha on [1/2, 1] turn both
    // endpoint singularities into bounded integrands.
    const double ea = 1.0 / alpha - 1.0;
    const double eb = 1.0 / beta - 1.0;
    quadrature::Options opts;
    opts.rel_tol = 1e-14;
    const auto lower = quadrature::adaptive(
        [&](double u) { return beta * std::pow(1.0 - std::pow(u, beta), ea); }, 0.0,
        std::pow(0.5, 1.0 / beta), opts);
    const auto upper = quadrature::adaptive(
        [&](double v) { return alpha * std::pow(1.0 - std::pow(v, alpha), eb); }, 0.0,
        std::pow(0.5, 1.0 / alpha), opts);
    if (!lower.converged || !upper.converged) {
        throw NumericalError("period quadrature did not reach its tolerance");
    }
    return lower.value + upper.value;
}

double period_quadrature(const OscillatorSpec& spec) {
    return 4.0 * spec.time_scale() * beta_integral_quadrature(spec.alpha(), spec.beta());
}

namespace {

// x = q^beta g^2 / E, clamped to 1 against round-off at the turning point.
double reduced_coordinate(const OscillatorSpec& spec, double q) {
    const double q_turn = spec.turning_point();
    if (!(q >= 0.0) || q > q_turn * (1.0 + 1e-12)) {
        throw DomainError("time of flight needs 0 <= q <= turning point");
    }
    return std::min(1.0, std::pow(q, spec.beta()) * spec.g2() / spec.energy());
}

}  // namespace

double hj_time_of_flight(const OscillatorSpec& spec, double q) {
    const double x = reduced_coordinate(spec, q);
    return spec.time_scale() * specfun::inc_beta(1.0 / spec.beta(), 1.0 / spec.alpha(), x);
}

double hj_time_of_flight_hypergeometric(const OscillatorSpec& spec, double q) {
    const double x = reduced_coordinate(spec, q);
    const double a = spec.alpha();
    const double b = spec.beta();
    const double front =
        std::pow(spec.energy(), 1.0 / a - 1.0) / (a * std::pow(spec.params().d_alpha(), 1.0 / a));
    return front * std::min(q, spec.turning_point()) *
           specfun::hyp2f1(1.0 / b, 1.0 - 1.0 / a, 1.0 / b + 1.0, x);
}

double hj_position(const OscillatorSpec& spec, double t) {
    const double quarter = period(spec) / 4.0;
    if (!(t >= 0.0) || t > quarter * (1.0 + 1e-12)) {
        throw DomainError("hj_position needs 0 <= t <= T/4");
    }
    const double a = 1.0 / spec.beta();
    const double b = 1.0 / spec.alpha();
    const double target = std::min(t / spec.time_scale(), specfun::beta(a, b));
    const double x = specfun::inv_inc_beta(a, b, target);
    return spec.turning_point() * std::pow(x, 1.0 / spec.beta());
}

double hj_trajectory(const OscillatorSpec& spec, double t, double delta) {
    const double T = period(spec);
    const double quarter = T / 4.0;
    double phase = std::fmod(t + delta, T);
    if (phase < 0.0) phase += T;
    if (phase <= quarter) return hj_position(spec, phase);
    if (phase <= 2.0 * quarter) return hj_position(spec, std::max(0.0, 2.0 * quarter - phase));
    if (phase <= 3.0 * quarter) return -hj_position(spec, phase - 2.0 * quarter);
    return -hj_position(spec, std::max(0.0, T - phase));
}

double quantum_levels(const FractionalParams& params, const PowerLawPotential& pot, double hbar,
                      std::size_t n) {
    pot.require_oscillator();
    if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
    const double a = params.alpha();
    const double b = pot.degree();
    const double k = a * b / (a + b);
    const double base = std::numbers::pi * hbar * b * std::pow(params.d_alpha(), 1.0 / a) *
                        std::pow(pot.strength(), 1.0 / b) /
                        (2.0 * specfun::beta(1.0 / b, 1.0 / a + 1.0));
    return std::pow(base, k) * std::pow(static_cast<double>(n) + 0.5, k);
}

double classical_limit_solution(double energy, double mass, double g, double delta, double t) {
    if (!(energy > 0.0) || !(mass > 0.0) || !(g > 0.0)) {
        throw DomainError("harmonic solution needs E, m, g > 0");
    }
    const double omega = std::sqrt(2.0 / mass) * g;
    return std::sqrt(2.0 * energy / (mass * omega * omega)) * std::sin(omega * (t + delta));
}

PeriodReport period_report(const OscillatorSpec& spec, const std::optional<IntegratorConfig>& cfg) {
    PeriodReport r;
    r.closed_form = period(spec);
    r.quadrature = period_quadrature(spec);
    double lo = std::min(r.closed_form, r.quadrature);
    double hi = std::max(r.closed_form, r.quadrature);
    if (cfg) {
        r.ode_measured = measure_period(spec.params(), spec.pot(), spec.energy(), *cfg);
        lo = std::min(lo, *r.ode_measured);
        hi = std::max(hi, *r.ode_measured);
    }
    r.max_pairwise_rel_diff = (hi - lo) / r.closed_form;
    return r;
}

}  // namespace fracmech::oscillator
