#include "fracmech/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fracmech {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

Vec unit_or_zero(const Vec& v) {
    const double n = v.norm();
    if (n == 0.0) return Vec::zeros(v.size());
    return v * (1.0 / n);
}

void require_same_dim(const Vec& a, const Vec& b) {
    if (a.size() != b.size() || a.empty()) {
        throw DomainError("position and momentum/velocity dimensions differ");
    }
}

// (1/(alpha D))^(1/(alpha-1)), the inverse-Legendre prefactor.
double legendre_factor(const FractionalParams& params) {
    const double a = params.alpha();
    return std::pow(1.0 / (a * params.d_alpha()), 1.0 / (a - 1.0));
}

}  // namespace

double abs_pow(double x, double k) {
    const double ax = std::abs(x);
    if (ax == 0.0) {
        if (k > 0.0) return 0.0;
        if (k == 0.0) return 1.0;
        return HUGE_VAL;
    }
    return std::pow(ax, k);
}

double DiffStep::at(double x) const { return std::max(abs, rel * std::abs(x)); }

FractionalParams::FractionalParams(double alpha, double d_alpha) : alpha_(alpha), d_alpha_(d_alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw DomainError("alpha must lie in (1, 2], got " + fmt(alpha));
    }
    if (!(d_alpha > 0.0) || !std::isfinite(d_alpha)) {
        throw DomainError("D_alpha must be positive, got " + fmt(d_alpha));
    }
}

FractionalParams FractionalParams::from_mass(double mass) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw DomainError("mass must be positive, got " + fmt(mass));
    }
    return {2.0, 1.0 / (2.0 * mass)};
}

double FractionalParams::kinetic(const Vec& p) const { return d_alpha_ * abs_pow(p.norm(), alpha_); }

PowerLawPotential::PowerLawPotential(double strength, double degree)
    : strength_(strength), degree_(degree) {
    if (degree == 0.0 || !std::isfinite(degree)) {
        throw DomainError("potential degree must be finite and nonzero");
    }
    if (!std::isfinite(strength)) throw DomainError("potential strength must be finite");
}

double PowerLawPotential::value(const Vec& q) const {
    if (strength_ == 0.0) return 0.0;
    const double r = q.norm();
    if (r == 0.0 && degree_ < 0.0) {
        throw DomainError("potential of negative degree is singular at the origin");
    }
    return strength_ * abs_pow(r, degree_);
}

Vec PowerLawPotential::gradient(const Vec& q) const {
    if (strength_ == 0.0) return Vec::zeros(q.size());
    const double r = q.norm();
    if (r == 0.0) {
        if (degree_ > 1.0) return Vec::zeros(q.size());
        throw DomainError("force of degree " + fmt(degree_) + " potential is singular at the origin");
    }
    // s * beta * r^(beta-1) * q/r
    return q * (strength_ * degree_ * abs_pow(r, degree_ - 2.0));
}

bool PowerLawPotential::is_oscillator() const {
    return strength_ > 0.0 && degree_ > 1.0 && degree_ <= 2.0;
}

void PowerLawPotential::require_oscillator() const {
    if (!(strength_ > 0.0)) throw DomainError("oscillator needs g^2 > 0, got " + fmt(strength_));
    if (!(degree_ > 1.0 && degree_ <= 2.0)) {
        throw DomainError("oscillator needs beta in (1, 2], got " + fmt(degree_));
    }
}

void validate(const PhaseState& state) {
    if (state.q.empty() || state.q.size() != state.p.size()) {
        throw DomainError("phase state needs q and p of equal dimension 1..3");
    }
}

InitialConditions InitialConditions::with_momentum(Vec q0, Vec p0) {
    require_same_dim(q0, p0);
    return {q0, std::nullopt, p0};
}

InitialConditions InitialConditions::with_velocity(Vec q0, Vec qdot0) {
    require_same_dim(q0, qdot0);
    return {q0, qdot0, std::nullopt};
}

Vec InitialConditions::momentum(const FractionalParams& params) const {
    if (qdot0.has_value() == p0.has_value()) {
        throw DomainError("initial conditions need exactly one of velocity or momentum");
    }
    if (p0) {
        require_same_dim(q0, *p0);
        return *p0;
    }
    require_same_dim(q0, *qdot0);
    return momentum_from_velocity(params, *qdot0);
}

PhaseState InitialConditions::state(const FractionalParams& params, double t0) const {
    return {t0, q0, momentum(params)};
}

double hamiltonian(const FractionalParams& params, const PowerLawPotential& pot,
                   const PhaseState& state) {
    validate(state);
    return params.kinetic(state.p) + pot.value(state.q);
}

double lagrangian(const FractionalParams& params, const PowerLawPotential& pot, const Vec& q,
                  const Vec& qdot) {
    require_same_dim(q, qdot);
    const double a = params.alpha();
    const double kinetic =
        legendre_factor(params) * (a - 1.0) / a * abs_pow(qdot.norm(), a / (a - 1.0));
    return kinetic - pot.value(q);
}

Vec momentum_from_velocity(const FractionalParams& params, const Vec& qdot) {
    const double a = params.alpha();
    const double magnitude = legendre_factor(params) * abs_pow(qdot.norm(), 1.0 / (a - 1.0));
    return unit_or_zero(qdot) * magnitude;
}

Vec velocity_from_momentum(const FractionalParams& params, const Vec& p) {
    const double a = params.alpha();
    const double magnitude = a * params.d_alpha() * abs_pow(p.norm(), a - 1.0);
    return unit_or_zero(p) * magnitude;
}

PhaseRate hamilton_rhs(const FractionalParams& params, const PowerLawPotential& pot,
                       const PhaseState& state) {
    validate(state);
    return {velocity_from_momentum(params, state.p), -pot.gradient(state.q)};
}

double euler_lagrange_residual(const FractionalParams& params, const PowerLawPotential& pot,
                               double q, double qdot, double qddot) {
    const double a = params.alpha();
    if (qdot == 0.0 && a < 2.0) {
        throw DomainError("Lagrangian equation is singular at qdot = 0 for alpha < 2");
    }
    const double inertia = legendre_factor(params) / (a - 1.0) * abs_pow(qdot, (2.0 - a) / (a - 1.0));
    return inertia * qddot + pot.gradient(Vec{q})[0];
}

namespace {

struct Gradient {
    Vec dq;
    Vec dp;
};

Gradient numeric_gradient(const ScalarField& f, const PhaseState& s, const DiffStep& step) {
    Gradient g{Vec::zeros(s.dim()), Vec::zeros(s.dim())};
    for (std::size_t i = 0; i < s.dim(); ++i) {
        PhaseState lo = s;
        PhaseState hi = s;
        const double hq = step.at(s.q[i]);
        lo.q[i] -= hq;
        hi.q[i] += hq;
        g.dq[i] = (f(hi) - f(lo)) / (hi.q[i] - lo.q[i]);

        lo = s;
        hi = s;
        const double hp = step.at(s.p[i]);
        lo.p[i] -= hp;
        hi.p[i] += hp;
        g.dp[i] = (f(hi) - f(lo)) / (hi.p[i] - lo.p[i]);
    }
    return g;
}

}  // namespace

double poisson_bracket(const ScalarField& u, const ScalarField& v, const PhaseState& state,
                       DiffStep step) {
    validate(state);
    const Gradient gu = numeric_gradient(u, state, step);
    const Gradient gv = numeric_gradient(v, state, step);
    return gu.dp.dot(gv.dq) - gu.dq.dot(gv.dp);
}

double poisson_bracket_with_hamiltonian(const FractionalParams& params,
                                        const PowerLawPotential& pot, const ScalarField& f,
                                        const PhaseState& state, DiffStep step) {
    const PhaseRate rate = hamilton_rhs(params, pot, state);
    const Gradient gf = numeric_gradient(f, state, step);
    // dH/dp = qdot, dH/dq = -pdot
    return rate.qdot.dot(gf.dq) + rate.pdot.dot(gf.dp);
}

double total_time_derivative(const ScalarField& f, const FractionalParams& params,
                             const PowerLawPotential& pot, const PhaseState& state,
                             DiffStep step) {
    PhaseState lo = state;
    PhaseState hi = state;
    const double ht = step.at(state.t);
    lo.t -= ht;
    hi.t += ht;
    const double explicit_dt = (f(hi) - f(lo)) / (hi.t - lo.t);
    return explicit_dt + poisson_bracket_with_hamiltonian(params, pot, f, state, step);
}

double turning_point(const PowerLawPotential& pot, double energy) {
    if (!(energy > 0.0) || !(pot.strength() > 0.0) || !(pot.degree() > 0.0)) {
        throw DomainError("turning point needs E > 0, strength > 0 and degree > 0");
    }
    return std::pow(energy / pot.strength(), 1.0 / pot.degree());
}

FreeParticlePoint free_particle_trajectory(const FractionalParams& params, double energy,
                                           double delta, double t) {
    if (!(energy > 0.0)) throw DomainError("free particle needs E > 0, got " + fmt(energy));
    const double a = params.alpha();
    const double d = params.d_alpha();
    const double ratio = energy / d;
    return {a * d * std::pow(ratio, 1.0 - 1.0 / a) * (t + delta), std::pow(ratio, 1.0 / a)};
}

}  // namespace fracmech
