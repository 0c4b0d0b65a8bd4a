#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracmech/integrate.hpp"
#include "fracmech/oscillator.hpp"
#include "fracmech/quadrature.hpp"
#include "fracmech/trajectory.hpp"
#include "support.hpp"

using namespace fracmech;
using oracle::rel_err;

TEST_CASE("Gauss-Legendre rules") {
    for (std::size_t n : {1u, 2u, 7u, 16u, 40u}) {
        const auto& rule = quadrature::gauss_legendre(n);
        REQUIRE(rule.nodes.size() == n);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // Exact for polynomials of degree 2n - 1.
        const auto mono = [n](double x) { return std::pow(x, 2.0 * n - 2.0); };
        CHECK(rel_err(quadrature::fixed(mono, -1.0, 1.0, n), 2.0 / (2.0 * n - 1.0)) < 1e-13);
    }
    CHECK(rel_err(quadrature::fixed([](double x) { return std::exp(x); }, 0.0, 1.0, 16), std::exp(1.0) - 1) <
          1e-15);
}

TEST_CASE("adaptive quadrature") {
    const auto r = quadrature::adaptive([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(rel_err(r.value, std::numbers::pi / 4) < 1e-14);
    // Interior kink forces subdivision.
    const auto k = quadrature::adaptive([](double x) { return std::abs(x - 0.3137); }, 0.0, 1.0);
    CHECK(k.converged);
    CHECK(k.intervals > 1);
    CHECK(rel_err(k.value, (0.3137 * 0.3137 + 0.6863 * 0.6863) / 2) < 1e-12);
    CHECK(quadrature::adaptive([](double) { return 3.0; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("dense segments are mapped exactly by rescaling") {
    const FractionalParams params(1.5, 1.0);
    const PowerLawPotential pot(1.0, 1.5);
    const auto run = integrate(params, pot, InitialConditions::with_momentum(Vec{0.2}, Vec{0.9}), 0.0, 2.0);
    const Trajectory& tr = run.trajectory;
    CHECK(tr.samples().size() == tr.segments().size() + 1);
    for (std::size_t i = 0; i + 1 < tr.samples().size(); ++i) {
        CHECK(tr.samples()[i].state.t < tr.samples()[i + 1].state.t);
    }
    for (const auto& s : tr.samples()) CHECK(s.energy == hamiltonian(params, pot, s.state));

    const Trajectory scaled = tr.rescaled(2.0, 3.0, 5.0, 7.0);
    for (double t : {0.0, 0.37, 1.234, 2.0}) {
        const PhaseState a = tr.state_at(t);
        const PhaseState b = scaled.state_at(2.0 * t);
        CHECK(rel_err(b.q[0], 3.0 * a.q[0]) < 1e-13);
        CHECK(rel_err(b.p[0], 5.0 * a.p[0]) < 1e-13);
    }
    CHECK(rel_err(scaled.samples().back().energy, 7.0 * tr.samples().back().energy) < 1e-15);
    CHECK_THROWS_AS(static_cast<void>(tr.state_at(2.5)), DomainError);
}

TEST_CASE("dense output derivative tracks the Hamilton equations") {
    const FractionalParams params(1.5, 1.0);
    const PowerLawPotential pot(1.0, 2.0);
    const auto run = integrate(params, pot, InitialConditions::with_momentum(Vec{0.0}, Vec{1.0}), 0.0, 3.0);
    for (double t : {0.1, 0.77, 1.9, 2.8}) {
        const PhaseState s = run.trajectory.state_at(t);
        const PhaseRate exact = hamilton_rhs(params, pot, s);
        const PhaseRate dense = run.trajectory.rate_at(t);
        CHECK(std::abs(dense.qdot[0] - exact.qdot[0]) < 1e-7);
        CHECK(std::abs(dense.pdot[0] - exact.pdot[0]) < 1e-7);
    }
}

TEST_CASE("action examples") {
    // Free particle with m = 1 and unit velocity for one second.
    const FractionalParams classical = FractionalParams::from_mass(1.0);
    const PowerLawPotential free(0.0, 2.0);
    const auto run = integrate(classical, free, InitialConditions::with_velocity(Vec{0.0}, Vec{1.0}), 0.0, 1.0);
    const ActionResult s = action(classical, free, run.trajectory);
    CHECK(rel_err(s.value, 0.5) < 1e-12);
    CHECK(s.tolerance_met);

    Trajectory empty;
    empty.push_first({PhaseState{0.0, Vec{0.0}, Vec{1.0}}, 0.5});
    CHECK(action(classical, free, empty).value == 0.0);

    // Harmonic oscillator: kinetic and potential averages cancel over a period.
    const PowerLawPotential harmonic(1.0, 2.0);
    const double T = std::numbers::pi * std::sqrt(2.0);
    const auto osc = integrate(classical, harmonic, InitialConditions::with_momentum(Vec{1.0}, Vec{0.0}), 0.0, T);
    const ActionResult h = action(classical, harmonic, osc.trajectory);
    CHECK(std::abs(h.value) < 1e-8);
    CHECK(h.tolerance_met);
}

TEST_CASE("property: action is stationary on integrated trajectories") {
    auto g = oracle::rng(31);
    for (double a : {1.1, 1.5, 1.9, 2.0}) {
        for (double b : {1.1, 1.5, 1.9, 2.0}) {
            const oscillator::OscillatorSpec spec(FractionalParams(a, 1.0), PowerLawPotential(1.0, b), 1.0);
            const double T = oscillator::period(spec);
            // Window around the first turning point, clear of q = 0.
            const double ta = 0.05 * T;
            const double tb = 0.45 * T;
            const auto run = integrate(spec.params(), spec.pot(),
                                       InitialConditions::with_momentum(Vec{0.0}, Vec{spec.max_momentum()}), 0.0, T);
            // Break at every step and at the turning point, where the
            // integrand has a kink in t for alpha < 2.
            std::vector<double> breaks{ta, tb};
            for (double t : run.trajectory.times()) {
                if (t > ta && t < tb) breaks.push_back(t);
            }
            for (const auto& e : run.events) {
                if (e.time > ta && e.time < tb) breaks.push_back(e.time);
            }
            std::sort(breaks.begin(), breaks.end());

            const int modes = 1 + static_cast<int>(oracle::uniform(g, 0.0, 3.0));
            const double amp = oracle::uniform(g, 0.5, 1.5);
            auto path_with = [&](double eps) -> PathFunction {
                return [&, eps](double t) {
                    const double w = modes * std::numbers::pi / (tb - ta);
                    const PhaseState s = run.trajectory.state_at(t);
                    const double eta = amp * std::sin(w * (t - ta));
                    const double deta = amp * w * std::cos(w * (t - ta));
                    const Vec qdot = velocity_from_momentum(spec.params(), s.p);
                    return std::pair{Vec{s.q[0] + eps * eta}, Vec{qdot[0] + eps * deta}};
                };
            };
            const double eps = 1e-4;
            auto s_at = [&](double e) { return action_of_path(spec.params(), spec.pot(), path_with(e), breaks); };
            const double up = s_at(eps);
            const double down = s_at(-eps);
            const double centre = s_at(0.0);
            // Fourth-order stencil: for alpha near 1 the third variation is
            // large enough to swamp a plain central difference.
            const double first_order = (-s_at(2 * eps) + 8 * up - 8 * down + s_at(-2 * eps)) / (12 * eps);
            CHECK_MESSAGE(std::abs(first_order) < 1e-6, "alpha=" << a << " beta=" << b);
            // The second variation is what remains, and it is not zero.
            CHECK(std::abs((up + down - 2 * centre) / (eps * eps)) > 1e-3);
        }
    }
}
