#pragma once

// Adaptive Dormand-Prince 5(4) integration of the fractional Hamilton
// equations with dense output and sign-crossing event location.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracmech/errors.hpp"
#include "fracmech/model_core.hpp"
#include "fracmech/trajectory.hpp"

namespace fracmech {

enum class EventKind {
    TurningPoint,    // a momentum component changes sign
    OriginCrossing,  // a position component changes sign
    Custom,          // IntegratorConfig::custom_event changes sign
};

const char* to_string(EventKind kind);

/// Ends the run once `count` events of `kind` (and, if nonzero, of the given
/// crossing direction: +1 for - to +, -1 for + to -) have been recorded.
struct StopRule {
    EventKind kind = EventKind::TurningPoint;
    int direction = 0;
    std::size_t count = 1;
};

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;  // relative to the derived q/p scales
    std::size_t max_steps = 5'000'000;
    std::optional<double> initial_step;
    double event_tol = 1e-12;

    bool detect_turning_points = true;
    bool detect_origin_crossings = true;
    ScalarField custom_event;
    std::optional<StopRule> stop;

    /// Override the scales derived from the initial energy.
    std::optional<double> q_scale;
    std::optional<double> p_scale;

    void validate() const;
};

struct EventRecord {
    EventKind kind;
    std::size_t component;  // vector component; 0 for custom events
    int direction;          // +1 crossing upward, -1 downward
    double time;
    PhaseState state;
};

struct IntegrationResult {
    Trajectory trajectory;
    std::vector<EventRecord> events;
    double max_energy_drift = 0.0;
    bool stopped_by_rule = false;
    double q_scale = 1.0;
    double p_scale = 1.0;
};

class IntegrationError : public NumericalError {
public:
    enum class Reason { StepUnderflow, MaxStepsExceeded };

    IntegrationError(Reason reason, PhaseState state, const std::string& what)
        : NumericalError(what), reason_(reason), state_(std::move(state)) {}

    [[nodiscard]] Reason reason() const { return reason_; }
    [[nodiscard]] const PhaseState& state() const { return state_; }

private:
    Reason reason_;
    PhaseState state_;
};

struct Scales {
    double q;
    double p;
};

/// Momentum scale from the free-particle relation p = (E/D)^(1/alpha) and
/// length scale from the turning point (or the initial radius when the
/// motion is unbounded).
Scales derive_scales(const FractionalParams& params, const PowerLawPotential& pot,
                     const PhaseState& start, double span);

IntegrationResult integrate(const FractionalParams& params, const PowerLawPotential& pot,
                            const InitialConditions& ic, double t0, double t1,
                            const IntegratorConfig& cfg = {});

/// Launches at the turning point with p = 0 and returns the time of the
/// second momentum sign change, i.e. one full oscillation.
double measure_period(const FractionalParams& params, const PowerLawPotential& pot,
                      double energy, const IntegratorConfig& cfg = {});

}  // namespace fracmech
