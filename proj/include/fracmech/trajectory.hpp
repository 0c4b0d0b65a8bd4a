#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fracmech/model_core.hpp"

namespace fracmech {

/// Packed phase-space point: q components first, then p components.
using PackedState = std::array<double, 2 * Vec::kMaxDim>;

PackedState pack(const PhaseState& s);
PhaseState unpack(const PackedState& y, std::size_t dim, double t);

/// Continuous extension of one accepted step on [t0, t0 + h]:
///   y(theta) = c0 + theta (c1 + (1 - theta)(c2 + theta (c3 + (1 - theta) c4)))
/// with theta = (t - t0) / h.
struct DenseSegment {
    double t0 = 0.0;
    double h = 0.0;
    std::array<PackedState, 5> c{};

    [[nodiscard]] double t1() const { return t0 + h; }
    [[nodiscard]] PackedState value(double t, std::size_t n) const;
    [[nodiscard]] PackedState derivative(double t, std::size_t n) const;
};

struct Sample {
    PhaseState state;
    double energy = 0.0;
};

/// Ordered integrator output. Sample i and i+1 bracket segment i.
class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(std::size_t dim) : dim_(dim) {}

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const std::vector<Sample>& samples() const { return samples_; }
    [[nodiscard]] const std::vector<DenseSegment>& segments() const { return segments_; }
    [[nodiscard]] std::size_t accepted_steps() const { return accepted_; }
    [[nodiscard]] std::size_t rejected_steps() const { return rejected_; }

    [[nodiscard]] bool empty() const { return samples_.empty(); }
    [[nodiscard]] double t_begin() const;
    [[nodiscard]] double t_end() const;

    /// Dense-output state at any t in [t_begin, t_end].
    [[nodiscard]] PhaseState state_at(double t) const;
    /// Time derivative of the dense-output polynomial.
    [[nodiscard]] PhaseRate rate_at(double t) const;

    /// |H_i - H_0| / |H_0| (absolute drift when H_0 == 0).
    [[nodiscard]] double energy_drift(std::size_t i) const;
    [[nodiscard]] double max_energy_drift() const;

    /// Sample times, usable as quadrature breakpoints.
    [[nodiscard]] std::vector<double> times() const;

    void push_first(Sample s);
    void push_step(const DenseSegment& seg, Sample end);
    void count_rejected() { ++rejected_; }

    /// Copy with t -> time_factor*t, q -> q_factor*q, p -> p_factor*p and
    /// energies multiplied by energy_factor (dense segments mapped exactly).
    [[nodiscard]] Trajectory rescaled(double time_factor, double q_factor, double p_factor,
                                      double energy_factor) const;

private:
    [[nodiscard]] const DenseSegment& segment_for(double t) const;

    std::size_t dim_ = 0;
    std::vector<Sample> samples_;
    std::vector<DenseSegment> segments_;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
};

struct ActionResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool tolerance_met = true;
};

/// Action integral of L(qdot, q) along a trajectory, per-segment
/// Gauss-Legendre on the dense output; qdot is dH/dp at the dense momentum.
/// tolerance_met is false when the 8- and 16-point rules disagree by more
/// than tol (relative to the summed |L| scale).
ActionResult action(const FractionalParams& params, const PowerLawPotential& pot,
                    const Trajectory& traj, double tol = 1e-10);

/// Position and velocity of an arbitrary path at time t.
using PathFunction = std::function<std::pair<Vec, Vec>(double)>;

/// Action of an arbitrary path, composite 16-point Gauss-Legendre over breakpoints.
double action_of_path(const FractionalParams& params, const PowerLawPotential& pot,
                      const PathFunction& path, std::span<const double> breakpoints);

}  // namespace fracmech
