#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracmech/integrate.hpp"
#include "fracmech/oscillator.hpp"
#include "support.hpp"

using namespace fracmech;
using oracle::rel_err;

namespace {

const double kGrid[] = {1.1, 1.5, 1.9, 2.0};

IntegrationResult launch_from_origin(const oscillator::OscillatorSpec& spec, double t1,
                                     const IntegratorConfig& cfg = {}) {
    return integrate(spec.params(), spec.pot(),
                     InitialConditions::with_momentum(Vec{0.0}, Vec{spec.max_momentum()}), 0.0, t1, cfg);
}

}  // namespace

TEST_CASE("config validation") {
    IntegratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.abs_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.max_steps = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.initial_step = -1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);

    const FractionalParams params(1.5, 1.0);
    const PowerLawPotential pot(1.0, 2.0);
    const auto ic = InitialConditions::with_momentum(Vec{0.0}, Vec{1.0});
    CHECK_THROWS_AS(integrate(params, pot, ic, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(integrate(params, PowerLawPotential(-1.0, -1.0), ic, 0.0, 1.0), DomainError);
}

TEST_CASE("harmonic limit matches the cosine solution") {
    const FractionalParams params = FractionalParams::from_mass(1.0);
    const PowerLawPotential pot(1.0, 2.0);
    const double w = std::sqrt(2.0);
    const double T = 2 * std::numbers::pi / w;
    const auto run = integrate(params, pot, InitialConditions::with_momentum(Vec{1.0}, Vec{0.0}), 0.0, T);
    CHECK(run.trajectory.t_end() == T);
    for (int k = 0; k <= 200; ++k) {
        const double t = T * k / 200.0;
        CHECK(std::abs(run.trajectory.state_at(t).q[0] - std::cos(w * t)) < 1e-8);
    }
    CHECK(run.max_energy_drift < 1e-10);
}

TEST_CASE("free particle moves uniformly") {
    const FractionalParams params(1.5, 1.0);
    const PowerLawPotential free(0.0, 2.0);
    const double slope = 1.5 * std::pow(1.0, 1.0 - 1.0 / 1.5);
    const auto run = integrate(params, free, InitialConditions::with_momentum(Vec{0.0}, Vec{1.0}), 0.0, 10.0);
    for (double t : {0.0, 0.5, 3.3, 10.0}) {
        CHECK(std::abs(run.trajectory.state_at(t).q[0] - slope * t) <= 1e-10 * std::max(1.0, slope * t));
    }
    CHECK(run.events.empty());
}

TEST_CASE("turning-point spacing gives the period") {
    const oscillator::OscillatorSpec spec(FractionalParams(1.5, 1.0), PowerLawPotential(1.0, 1.5), 1.0);
    const double T = oscillator::period(spec);
    IntegratorConfig cfg;
    cfg.detect_origin_crossings = false;
    const auto run = launch_from_origin(spec, 2.0 * T, cfg);
    std::vector<double> tp;
    for (const auto& e : run.events) {
        CHECK(e.kind == EventKind::TurningPoint);
        tp.push_back(e.time);
    }
    REQUIRE(tp.size() == 4);
    CHECK(rel_err(tp[0], T / 4) < 1e-8);
    CHECK(rel_err(tp[2] - tp[0], T) < 1e-6);
    CHECK(rel_err(tp[3] - tp[1], T) < 1e-6);
    CHECK(run.events[0].direction == -1);
    CHECK(run.events[1].direction == +1);
}

TEST_CASE("measure_period examples") {
    const FractionalParams classical = FractionalParams::from_mass(1.0);
    const PowerLawPotential harmonic(1.0, 2.0);
    const double want = std::numbers::pi * std::sqrt(2.0);
    for (double e : {0.3, 1.0, 7.0}) CHECK(rel_err(measure_period(classical, harmonic, e), want) < 1e-8);
    CHECK(rel_err(measure_period(classical, harmonic, 1.0), measure_period(classical, harmonic, 100.0)) < 1e-8);

    const oscillator::OscillatorSpec spec(FractionalParams(1.5, 1.0), harmonic, 2.0);
    CHECK(rel_err(measure_period(spec.params(), spec.pot(), 2.0), oscillator::period(spec)) < 1e-6);
    CHECK_THROWS_AS(measure_period(classical, harmonic, 0.0), DomainError);
    CHECK_THROWS_AS(measure_period(classical, PowerLawPotential(1.0, 3.0), 1.0), DomainError);
}

TEST_CASE("events") {
    const oscillator::OscillatorSpec spec(FractionalParams(1.25, 1.0), PowerLawPotential(1.0, 1.75), 1.0);
    const double T = oscillator::period(spec);
    const double q_turn = spec.turning_point();
    const auto run = launch_from_origin(spec, 3.0 * T);
    std::size_t turning = 0;
    std::size_t crossings = 0;
    for (const auto& e : run.events) {
        CHECK(e.time >= run.trajectory.t_begin());
        CHECK(e.time <= run.trajectory.t_end());
        if (e.kind == EventKind::TurningPoint) {
            ++turning;
            CHECK(std::abs(e.state.p[0]) < 1e-8 * spec.max_momentum());
            CHECK(rel_err(spec.g2() * std::pow(std::abs(e.state.q[0]), spec.beta()), spec.energy()) < 1e-8);
        } else {
            ++crossings;
            CHECK(std::abs(e.state.q[0]) < 1e-8 * q_turn);
        }
    }
    CHECK(turning == 6);
    // The launch point itself is not an event.
    CHECK(crossings == 5);

    // A stop rule ends the run right after its event.
    IntegratorConfig cfg;
    cfg.stop = StopRule{EventKind::OriginCrossing, +1, 1};
    const auto stopped = launch_from_origin(spec, 3.0 * T, cfg);
    CHECK(stopped.stopped_by_rule);
    CHECK(rel_err(stopped.events.back().time, T) < 1e-8);
    CHECK(stopped.trajectory.t_end() < 1.1 * T);

    // Custom sign-crossing events.
    cfg = {};
    cfg.detect_turning_points = false;
    cfg.detect_origin_crossings = false;
    const double level = 0.5 * q_turn;
    cfg.custom_event = [level](const PhaseState& s) { return s.q[0] - level; };
    const auto custom = launch_from_origin(spec, T, cfg);
    REQUIRE(custom.events.size() == 2);
    CHECK(std::abs(custom.events[0].state.q[0] - level) < 1e-9);
    CHECK(rel_err(custom.events[0].time, oscillator::hj_time_of_flight(spec, level)) < 1e-8);
    CHECK(rel_err(custom.events[1].time, T / 2 - custom.events[0].time) < 1e-8);
}

TEST_CASE("integration failures") {
    // Radial fall into a 1/|q| centre cannot pass the singularity.
    const FractionalParams params(2.0, 0.5);
    const PowerLawPotential kepler(-1.0, -1.0);
    try {
        integrate(params, kepler, InitialConditions::with_momentum(Vec{1.0}, Vec{0.0}), 0.0, 10.0);
        FAIL("expected an integration error");
    } catch (const IntegrationError& e) {
        CHECK(e.reason() == IntegrationError::Reason::StepUnderflow);
        CHECK(std::abs(e.state().q[0]) < 1e-3);
    }

    IntegratorConfig cfg;
    cfg.max_steps = 10;
    try {
        integrate(params, PowerLawPotential(1.0, 2.0), InitialConditions::with_momentum(Vec{1.0}, Vec{0.0}), 0.0,
                  100.0, cfg);
        FAIL("expected an integration error");
    } catch (const IntegrationError& e) {
        CHECK(e.reason() == IntegrationError::Reason::MaxStepsExceeded);
    }
}

TEST_CASE("planar motion in a central potential conserves angular momentum") {
    const FractionalParams params(1.5, 1.0);
    const PowerLawPotential kepler(-1.0, -1.0);
    const auto run =
        integrate(params, kepler, InitialConditions::with_momentum(Vec{1.0, 0.0}, Vec{0.0, 0.5}), 0.0, 20.0);
    const auto ang = [](const PhaseState& s) { return s.q[0] * s.p[1] - s.q[1] * s.p[0]; };
    const double l0 = ang(run.trajectory.samples().front().state);
    for (const auto& s : run.trajectory.samples()) CHECK(std::abs(ang(s.state) - l0) < 1e-8 * std::abs(l0));
    CHECK(run.max_energy_drift < 1e-8);
}

TEST_CASE("property: energy conservation over ten periods") {
    for (double a : kGrid) {
        for (double b : kGrid) {
            for (double e : {0.5, 1.0, 5.0}) {
                const oscillator::OscillatorSpec spec(FractionalParams(a, 1.0), PowerLawPotential(1.0, b), e);
                const auto run = launch_from_origin(spec, 10.0 * oscillator::period(spec));
                CHECK_MESSAGE(run.max_energy_drift < 1e-8, "alpha=" << a << " beta=" << b << " E=" << e);
            }
        }
    }
}

TEST_CASE("property: time reversal") {
    for (double a : kGrid) {
        for (double b : kGrid) {
            for (double e : {0.5, 1.0, 5.0}) {
                const oscillator::OscillatorSpec spec(FractionalParams(a, 1.0), PowerLawPotential(1.0, b), e);
                const double T = oscillator::period(spec);
                const Vec q0{0.3 * spec.turning_point()};
                const Vec p0{std::pow(e - spec.g2() * std::pow(q0[0], b), 1.0 / a)};
                const auto fwd = integrate(spec.params(), spec.pot(), InitialConditions::with_momentum(q0, p0), 0, T);
                const PhaseState mid = fwd.trajectory.samples().back().state;
                const auto back =
                    integrate(spec.params(), spec.pot(), InitialConditions::with_momentum(mid.q, -mid.p), 0, T);
                const PhaseState end = back.trajectory.samples().back().state;
                const double dq = std::abs(end.q[0] - q0[0]) / spec.turning_point();
                const double dp = std::abs(-end.p[0] - p0[0]) / spec.max_momentum();
                CHECK_MESSAGE(std::max(dq, dp) < 1e-6, "alpha=" << a << " beta=" << b << " E=" << e);
            }
        }
    }
}

TEST_CASE("property: tighter tolerance does not increase the error") {
    for (auto [a, b] : {std::pair{2.0, 2.0}, {1.5, 1.5}, {1.25, 1.75}, {1.9, 1.1}, {1.1, 1.9}, {1.75, 1.25},
                        {1.1, 1.1}}) {
        const oscillator::OscillatorSpec spec(FractionalParams(a, 1.0), PowerLawPotential(1.0, b), 1.0);
        const double t1 = 3.3 * oscillator::period(spec);
        IntegratorConfig ref_cfg;
        ref_cfg.rel_tol = 1e-13;
        ref_cfg.abs_tol = 1e-14;
        const PhaseState ref = launch_from_origin(spec, t1, ref_cfg).trajectory.samples().back().state;
        auto error_at = [&](double rtol) {
            IntegratorConfig cfg;
            cfg.rel_tol = rtol;
            cfg.abs_tol = rtol / 100.0;
            const PhaseState s = launch_from_origin(spec, t1, cfg).trajectory.samples().back().state;
            return std::abs(s.q[0] - ref.q[0]) / spec.turning_point() + std::abs(s.p[0] - ref.p[0]) / spec.max_momentum();
        };
        // Asymptotic regime around the default tolerance. Much looser than
        // this, errors of either sign can cancel and single halvings stop
        // being monotone.
        double prev = error_at(5e-9);
        for (double rtol = 2.5e-9; rtol > 1.5e-11; rtol /= 2.0) {
            const double err = error_at(rtol);
            CHECK_MESSAGE(err <= prev, "alpha=" << a << " beta=" << b << " rtol=" << rtol);
            prev = err;
        }
    }
}
