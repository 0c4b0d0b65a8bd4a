#include "fracmech/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "fracmech/quadrature.hpp"

namespace fracmech {

PackedState pack(const PhaseState& s) {
    PackedState y{};
    const std::size_t d = s.dim();
    for (std::size_t i = 0; i < d; ++i) {
        y[i] = s.q[i];
        y[d + i] = s.p[i];
    }
    return y;
}

PhaseState unpack(const PackedState& y, std::size_t dim, double t) {
    PhaseState s{t, Vec(dim), Vec(dim)};
    for (std::size_t i = 0; i < dim; ++i) {
        s.q[i] = y[i];
        s.p[i] = y[dim + i];
    }
    return s;
}

PackedState DenseSegment::value(double t, std::size_t n) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    PackedState y{};
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
    }
    return y;
}

PackedState DenseSegment::derivative(double t, std::size_t n) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    PackedState dy{};
    for (std::size_t i = 0; i < n; ++i) {
        const double inner = c[2][i] + th * (c[3][i] + th1 * c[4][i]);
        const double inner_d = c[3][i] + (1.0 - 2.0 * th) * c[4][i];
        dy[i] = (c[1][i] + (1.0 - 2.0 * th) * inner + th * th1 * inner_d) / h;
    }
    return dy;
}

double Trajectory::t_begin() const { return samples_.front().state.t; }
double Trajectory::t_end() const { return samples_.back().state.t; }

void Trajectory::push_first(Sample s) {
    samples_.clear();
    segments_.clear();
    dim_ = s.state.dim();
    samples_.push_back(std::move(s));
}

void Trajectory::push_step(const DenseSegment& seg, Sample end) {
    segments_.push_back(seg);
    samples_.push_back(std::move(end));
    ++accepted_;
}

const DenseSegment& Trajectory::segment_for(double t) const {
    if (segments_.empty()) throw DomainError("trajectory has no dense output");
    if (t < t_begin() || t > t_end()) {
        throw DomainError("time outside the trajectory span");
    }
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double x, const DenseSegment& s) { return x < s.t0; });
    if (it == segments_.begin()) return segments_.front();
    return *std::prev(it);
}

PhaseState Trajectory::state_at(double t) const {
    if (segments_.empty() && !samples_.empty() && t == t_begin()) return samples_.front().state;
    return unpack(segment_for(t).value(t, 2 * dim_), dim_, t);
}

PhaseRate Trajectory::rate_at(double t) const {
    const PhaseState d = unpack(segment_for(t).derivative(t, 2 * dim_), dim_, t);
    return {d.q, d.p};
}

double Trajectory::energy_drift(std::size_t i) const {
    const double e0 = samples_.front().energy;
    const double diff = std::abs(samples_.at(i).energy - e0);
    return e0 == 0.0 ? diff : diff / std::abs(e0);
}

double Trajectory::max_energy_drift() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) worst = std::max(worst, energy_drift(i));
    return worst;
}

std::vector<double> Trajectory::times() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.state.t);
    return out;
}

Trajectory Trajectory::rescaled(double time_factor, double q_factor, double p_factor,
                                double energy_factor) const {
    Trajectory out(*this);
    const std::size_t d = dim_;
    auto scale_packed = [&](PackedState& y) {
        for (std::size_t i = 0; i < d; ++i) {
            y[i] *= q_factor;
            y[d + i] *= p_factor;
        }
    };
    for (auto& s : out.samples_) {
        s.state.t *= time_factor;
        s.state.q *= q_factor;
        s.state.p *= p_factor;
        s.energy *= energy_factor;
    }
    for (auto& seg : out.segments_) {
        seg.t0 *= time_factor;
        seg.h *= time_factor;
        for (auto& coeff : seg.c) scale_packed(coeff);
    }
    return out;
}

ActionResult action(const FractionalParams& params, const PowerLawPotential& pot,
                    const Trajectory& traj, double tol) {
    ActionResult out;
    if (traj.segments().empty()) return out;
    const std::size_t n = 2 * traj.dim();
    double scale = 0.0;
    for (const auto& seg : traj.segments()) {
        auto integrand = [&](double t) {
            const PhaseState s = unpack(seg.value(t, n), traj.dim(), t);
            return lagrangian(params, pot, s.q, velocity_from_momentum(params, s.p));
        };
        auto magnitude = [&](double t) { return std::abs(integrand(t)); };
        const double lo = quadrature::fixed(integrand, seg.t0, seg.t1(), 8);
        const double hi = quadrature::fixed(integrand, seg.t0, seg.t1(), 16);
        out.value += hi;
        out.error_estimate += std::abs(hi - lo);
        scale += quadrature::fixed(magnitude, seg.t0, seg.t1(), 8);
    }
    out.tolerance_met = out.error_estimate <= tol * std::max(scale, 1e-300);
    return out;
}

double action_of_path(const FractionalParams& params, const PowerLawPotential& pot,
                      const PathFunction& path, std::span<const double> breakpoints) {
    auto integrand = [&](double t) {
        const auto [q, qdot] = path(t);
        return lagrangian(params, pot, q, qdot);
    };
    return quadrature::composite(integrand, breakpoints, 16);
}

}  // namespace fracmech
