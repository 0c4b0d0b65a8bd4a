#include "fracmech/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

namespace fracmech {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// 5th minus embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Shampine's continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

class HamiltonSystem {
public:
    HamiltonSystem(const FractionalParams& params, const PowerLawPotential& pot, std::size_t dim)
        : params_(params), pot_(pot), dim_(dim) {}

    [[nodiscard]] std::size_t size() const { return 2 * dim_; }
    [[nodiscard]] std::size_t dim() const { return dim_; }

    // Returns false when the right-hand side is singular or non-finite at y.
    bool rate(const PackedState& y, PackedState& out) const {
        const PhaseState s = unpack(y, dim_, 0.0);
        PhaseRate r;
        try {
            r = hamilton_rhs(params_, pot_, s);
        } catch (const DomainError&) {
            return false;
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            out[i] = r.qdot[i];
            out[dim_ + i] = r.pdot[i];
        }
        for (std::size_t i = 0; i < size(); ++i) {
            if (!std::isfinite(out[i])) return false;
        }
        return true;
    }

    [[nodiscard]] double energy(const PhaseState& s) const { return hamiltonian(params_, pot_, s); }

private:
    const FractionalParams& params_;
    const PowerLawPotential& pot_;
    std::size_t dim_;
};

struct StepAttempt {
    bool ok = false;
    PackedState y1{};
    PackedState k7{};
    double error = 0.0;
    DenseSegment segment;
};

PackedState combine(const PackedState& y, double h, std::initializer_list<std::pair<double, const PackedState*>> terms,
                    std::size_t n) {
    PackedState out = y;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (const auto& [w, k] : terms) acc += w * (*k)[i];
        out[i] += h * acc;
    }
    return out;
}

StepAttempt attempt_step(const HamiltonSystem& sys, double t, double h, const PackedState& y0,
                         const PackedState& k1, const PackedState& scale, double rel_tol) {
    const std::size_t n = sys.size();
    StepAttempt out;
    PackedState k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
    if (!sys.rate(combine(y0, h, {{a21, &k1}}, n), k2)) return out;
    if (!sys.rate(combine(y0, h, {{a31, &k1}, {a32, &k2}}, n), k3)) return out;
    if (!sys.rate(combine(y0, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, n), k4)) return out;
    if (!sys.rate(combine(y0, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, n), k5)) {
        return out;
    }
    if (!sys.rate(combine(y0, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, n),
                  k6)) {
        return out;
    }
    const PackedState y1 =
        combine(y0, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}}, n);
    if (!sys.rate(y1, k7)) return out;

    // Max norm: every component must meet its own tolerance.
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double err =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sk = scale[i] + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err) / sk);
    }
    out.error = worst;
    if (!std::isfinite(out.error)) return out;

    DenseSegment& seg = out.segment;
    seg.t0 = t;
    seg.h = h;
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = y1[i] - y0[i];
        const double bspl = h * k1[i] - diff;
        seg.c[0][i] = y0[i];
        seg.c[1][i] = diff;
        seg.c[2][i] = bspl;
        seg.c[3][i] = diff - h * k7[i] - bspl;
        seg.c[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                           d7 * k7[i]);
    }
    out.y1 = y1;
    out.k7 = k7;
    out.ok = true;
    return out;
}

struct EventFunction {
    EventKind kind;
    std::size_t component;  // index into the packed state, or custom
};

double event_value(const EventFunction& ef, const PackedState& y, std::size_t dim, double t,
                   const ScalarField& custom) {
    if (ef.kind == EventKind::Custom) return custom(unpack(y, dim, t));
    return y[ef.component];
}

std::string describe(const PhaseState& s) {
    std::ostringstream os;
    os.precision(17);
    os << "t=" << s.t << " q=(";
    for (std::size_t i = 0; i < s.dim(); ++i) os << (i ? "," : "") << s.q[i];
    os << ") p=(";
    for (std::size_t i = 0; i < s.dim(); ++i) os << (i ? "," : "") << s.p[i];
    os << ")";
    return os.str();
}

// Components whose zero crossing makes the right-hand side non-smooth:
// momenta when alpha < 2 (|p|^(alpha-1)), positions when the force
// |q|^(degree-1) is not polynomial.
// A step is treated as singular when it crosses one of these hyperplanes or
// ends within `near` (relative to the component scale) of it.
struct SingularSet {
    bool momentum = false;
    bool position = false;
    double q_near = 0.0;
    double p_near = 0.0;
};

bool near_singular(const SingularSet& sing, const PackedState& y0, const PackedState& y1,
                   std::size_t dim) {
    auto hits = [](double a, double b, double near) {
        return sign(a) != sign(b) || std::abs(a) <= near || std::abs(b) <= near;
    };
    for (std::size_t i = 0; i < dim; ++i) {
        if (sing.position && hits(y0[i], y1[i], sing.q_near)) return true;
        if (sing.momentum && hits(y0[dim + i], y1[dim + i], sing.p_near)) return true;
    }
    return false;
}

// Earliest time in (t, t + h) where a singular component of a 1D state
// changes sign, located on the dense output. Steps that end there keep the
// non-smooth point at a step boundary, where its error no longer depends on
// where it happens to fall inside the step.
std::optional<double> singular_crossing(const SingularSet& sing, const DenseSegment& seg,
                                        const PackedState& y0, const PackedState& y1, std::size_t dim) {
    if (dim != 1) return std::nullopt;
    std::optional<double> first;
    auto consider = [&](std::size_t i) {
        if (y0[i] == 0.0 || y1[i] == 0.0 || sign(y0[i]) == sign(y1[i])) return;
        double lo = seg.t0;
        double hi = seg.t0 + seg.h;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double v = seg.value(mid, 2 * dim)[i];
            if (v == 0.0) {
                lo = hi = mid;
                break;
            }
            (sign(v) == sign(y0[i]) ? lo : hi) = mid;
        }
        if (!first || hi < *first) first = hi;
    };
    if (sing.position) consider(0);
    if (sing.momentum) consider(dim);
    return first;
}

// Step-doubling estimate: the embedded pair assumes a smooth solution and
// can underestimate the error of a step across a singular hyperplane by
// orders of magnitude; the full step compared with two half steps cannot.
// That comparison must meet a tolerance `singular_weight` times tighter,
// since these errors share a sign from one crossing to the next and
// accumulate instead of averaging out. The tighter tolerance never drops
// below a few ulps of the state, where both paths only differ by rounding.
constexpr double singular_weight = 100.0;
constexpr double rounding_floor = 64.0 * std::numeric_limits<double>::epsilon();

double doubling_error(const HamiltonSystem& sys, double t, double h, const PackedState& y0,
                      const PackedState& k1, const PackedState& y_full, const PackedState& scale,
                      double rel_tol) {
    const std::size_t n = sys.size();
    const StepAttempt first = attempt_step(sys, t, 0.5 * h, y0, k1, scale, rel_tol);
    if (!first.ok) return HUGE_VAL;
    const StepAttempt second = attempt_step(sys, t + 0.5 * h, 0.5 * h, first.y1, first.k7, scale, rel_tol);
    if (!second.ok) return HUGE_VAL;
    double worst = std::max(first.error, second.error);
    for (std::size_t i = 0; i < n; ++i) {
        const double magnitude = std::max(std::abs(y0[i]), std::abs(y_full[i]));
        const double sk = (scale[i] + rel_tol * magnitude) / singular_weight;
        const double err = std::abs(y_full[i] - second.y1[i]);
        worst = std::max(worst, err / std::max(sk, rounding_floor * magnitude));
    }
    return worst;
}

double packed_norm(const PackedState& y, std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += y[i] * y[i];
    return std::sqrt(s);
}

}  // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::TurningPoint:
            return "turning_point";
        case EventKind::OriginCrossing:
            return "origin_crossing";
        case EventKind::Custom:
            return "custom";
    }
    return "unknown";
}

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("tolerances must be positive");
    if (max_steps == 0) throw DomainError("max_steps must be positive");
    if (!(event_tol > 0.0)) throw DomainError("event_tol must be positive");
    if (initial_step && !(*initial_step > 0.0)) throw DomainError("initial_step must be positive");
    if (q_scale && !(*q_scale > 0.0)) throw DomainError("q_scale must be positive");
    if (p_scale && !(*p_scale > 0.0)) throw DomainError("p_scale must be positive");
    if (stop && stop->count == 0) throw DomainError("stop rule needs a positive event count");
    if (stop && stop->kind == EventKind::Custom && !custom_event) {
        throw DomainError("stop rule on custom events needs a custom event function");
    }
}

Scales derive_scales(const FractionalParams& params, const PowerLawPotential& pot,
                     const PhaseState& start, double span) {
    const double energy = hamiltonian(params, pot, start);
    const double potential = pot.value(start.q);
    const double r0 = start.q.norm();
    const double p0 = start.p.norm();

    double p_scale = std::max(p0, std::pow((std::abs(energy) + std::abs(potential)) / params.d_alpha(),
                                           1.0 / params.alpha()));
    double q_scale = r0;
    if (pot.strength() > 0.0 && pot.degree() > 0.0 && energy > 0.0) {
        q_scale = std::max(q_scale, turning_point(pot, energy));
    }
    if (q_scale == 0.0) {
        q_scale = velocity_from_momentum(params, Vec{p_scale})[0] * span;
    }
    if (!(p_scale > 0.0) || !std::isfinite(p_scale)) p_scale = 1.0;
    if (!(q_scale > 0.0) || !std::isfinite(q_scale)) q_scale = 1.0;
    return {q_scale, p_scale};
}

IntegrationResult integrate(const FractionalParams& params, const PowerLawPotential& pot,
                            const InitialConditions& ic, double t0, double t1,
                            const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(t1 > t0) || !std::isfinite(t1) || !std::isfinite(t0)) {
        throw DomainError("integration span must satisfy t0 < t1");
    }
    const PhaseState start = ic.state(params, t0);
    validate(start);
    const std::size_t dim = start.dim();
    if (pot.degree() < 1.0 && pot.strength() != 0.0 && start.q.norm() == 0.0) {
        throw DomainError("initial position at the singular origin of the potential");
    }

    const HamiltonSystem sys(params, pot, dim);
    const std::size_t n = sys.size();
    const double span = t1 - t0;

    IntegrationResult result;
    const Scales derived = derive_scales(params, pot, start, span);
    result.q_scale = cfg.q_scale.value_or(derived.q);
    result.p_scale = cfg.p_scale.value_or(derived.p);

    PackedState scale{};
    for (std::size_t i = 0; i < dim; ++i) {
        scale[i] = cfg.abs_tol * result.q_scale;
        scale[dim + i] = cfg.abs_tol * result.p_scale;
    }

    std::vector<EventFunction> event_functions;
    for (std::size_t i = 0; i < dim; ++i) {
        if (cfg.detect_turning_points) event_functions.push_back({EventKind::TurningPoint, dim + i});
        if (cfg.detect_origin_crossings) event_functions.push_back({EventKind::OriginCrossing, i});
    }
    if (cfg.custom_event) event_functions.push_back({EventKind::Custom, 0});

    Trajectory& traj = result.trajectory;
    traj.push_first({start, sys.energy(start)});

    PackedState y = pack(start);
    PackedState k1{};
    if (!sys.rate(y, k1)) {
        throw DomainError("Hamilton equations are singular at the initial state " + describe(start));
    }

    double t = t0;
    double h = 0.0;
    if (cfg.initial_step) {
        h = *cfg.initial_step;
    } else {
        // Time for the state to move a small fraction of its scale.
        const double qdot = packed_norm(k1, 0, dim);
        const double pdot = packed_norm(k1, dim, n);
        double tau = span;
        if (qdot > 0.0) tau = std::min(tau, result.q_scale / qdot);
        if (pdot > 0.0) tau = std::min(tau, result.p_scale / pdot);
        h = 1e-3 * tau;
    }
    h = std::min(h, span);

    SingularSet singular;
    singular.momentum = params.alpha() < 2.0;
    singular.position = pot.strength() != 0.0 && pot.degree() != 2.0;
    // High derivatives of |x|^(k-1) stay large well away from x = 0; a 10%
    // window keeps the embedded estimate out of the region where it fails.
    singular.q_near = 1e-1 * result.q_scale;
    singular.p_near = 1e-1 * result.p_scale;

    const double p_slow = 1e-6 * result.p_scale;
    const double slow_cap = span / 1000.0;
    std::size_t stop_hits = 0;
    std::size_t steps = 0;
    bool last_rejected = false;

    while (t < t1) {
        if (steps >= cfg.max_steps) {
            throw IntegrationError(IntegrationError::Reason::MaxStepsExceeded, unpack(y, dim, t),
                                   "max_steps exceeded at " + describe(unpack(y, dim, t)));
        }
        if (packed_norm(y, dim, n) < p_slow) h = std::min(h, slow_cap);
        if (t + h > t1 || t1 - (t + h) < 1e-12 * span) h = t1 - t;
        const double h_min = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), span);
        if (h < h_min) {
            const PhaseState here = unpack(y, dim, t);
            throw IntegrationError(IntegrationError::Reason::StepUnderflow, here,
                                   "step size underflow near " + describe(here));
        }

        StepAttempt step = attempt_step(sys, t, h, y, k1, scale, cfg.rel_tol);
        ++steps;
        if (step.ok && step.error <= 1.0 && near_singular(singular, y, step.y1, dim)) {
            step.error = std::max(step.error, doubling_error(sys, t, h, y, k1, step.y1, scale, cfg.rel_tol));
        }
        // Shorten an acceptable step so that it ends on a singular crossing.
        double h_resume = 0.0;
        if (step.ok && step.error <= 1.0) {
            const auto cross = singular_crossing(singular, step.segment, y, step.y1, dim);
            if (cross && *cross - t > h_min && *cross < t + h) {
                StepAttempt shortened = attempt_step(sys, t, *cross - t, y, k1, scale, cfg.rel_tol);
                if (shortened.ok) {
                    shortened.error = std::max(shortened.error,
                                               doubling_error(sys, t, *cross - t, y, k1, shortened.y1, scale,
                                                              cfg.rel_tol));
                }
                if (shortened.ok && shortened.error <= 1.0) {
                    h_resume = h;
                    h = *cross - t;
                    step = std::move(shortened);
                } else {
                    // The straddling step cannot be trusted either.
                    traj.count_rejected();
                    h = (*cross - t) * (shortened.ok ? std::max(0.1, 0.6 * std::pow(shortened.error, -0.2)) : 0.25);
                    last_rejected = true;
                    continue;
                }
            }
        }
        if (!step.ok) {
            traj.count_rejected();
            h *= 0.25;
            last_rejected = true;
            continue;
        }
        if (step.error > 1.0) {
            traj.count_rejected();
            h *= std::max(0.1, 0.6 * std::pow(step.error, -0.2));
            last_rejected = true;
            continue;
        }

        const double t_next = (h == t1 - t) ? t1 : t + h;
        step.segment.h = t_next - t;

        // Events inside (t, t_next].
        std::vector<EventRecord> found;
        for (const auto& ef : event_functions) {
            const double ga = event_value(ef, y, dim, t, cfg.custom_event);
            const double gb = event_value(ef, step.y1, dim, t_next, cfg.custom_event);
            if (ga == 0.0 || sign(ga) == sign(gb)) continue;
            double lo = t;
            double hi = t_next;
            double root = t_next;
            if (gb != 0.0) {
                while (hi - lo > cfg.event_tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    const double gm =
                        event_value(ef, step.segment.value(mid, n), dim, mid, cfg.custom_event);
                    if (gm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if (sign(gm) == sign(ga)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                root = 0.5 * (lo + hi);
            }
            const std::size_t component = ef.kind == EventKind::TurningPoint ? ef.component - dim
                                          : ef.kind == EventKind::OriginCrossing ? ef.component
                                                                                 : 0;
            found.push_back({ef.kind, component, ga < 0.0 ? +1 : -1, root,
                             unpack(step.segment.value(root, n), dim, root)});
        }
        std::sort(found.begin(), found.end(),
                  [](const EventRecord& a, const EventRecord& b) { return a.time < b.time; });

        t = t_next;
        y = step.y1;
        k1 = step.k7;
        const PhaseState here = unpack(y, dim, t);
        traj.push_step(step.segment, {here, sys.energy(here)});

        bool stop_now = false;
        for (auto& ev : found) {
            result.events.push_back(ev);
            if (cfg.stop && ev.kind == cfg.stop->kind &&
                (cfg.stop->direction == 0 || cfg.stop->direction == ev.direction)) {
                if (++stop_hits >= cfg.stop->count) {
                    stop_now = true;
                    break;
                }
            }
        }
        if (stop_now) {
            result.stopped_by_rule = true;
            break;
        }

        // Conservative safety factor: drift from smooth steps is systematic,
        // so steps aim well inside the tolerance rather than just under it.
        double factor = std::min(5.0, std::max(0.2, 0.6 * std::pow(std::max(step.error, 1e-10), -0.2)));
        if (last_rejected) factor = std::min(factor, 1.0);
        last_rejected = false;
        h *= factor;
        // A step cut short at a crossing says little about the next one.
        if (h_resume > 0.0) h = std::max(h, 0.5 * h_resume);
    }

    result.max_energy_drift = traj.max_energy_drift();
    return result;
}

double measure_period(const FractionalParams& params, const PowerLawPotential& pot, double energy,
                      const IntegratorConfig& cfg) {
    pot.require_oscillator();
    if (!(energy > 0.0)) throw DomainError("period measurement needs E > 0");
    const double q_turn = turning_point(pot, energy);
    // A quarter period is at least q_turn / qdot_max; the integral factor
    // never exceeds 3 on the oscillator range, so 40x bounds a full cycle.
    const double p_max = std::pow(energy / params.d_alpha(), 1.0 / params.alpha());
    const double qdot_max = velocity_from_momentum(params, Vec{p_max})[0];
    const double horizon = 40.0 * q_turn / qdot_max;

    IntegratorConfig run = cfg;
    run.detect_origin_crossings = false;
    run.detect_turning_points = true;
    run.stop = StopRule{EventKind::TurningPoint, 0, 2};
    const auto result = integrate(params, pot, InitialConditions::with_momentum(Vec{q_turn}, Vec{0.0}),
                                  0.0, horizon, run);
    if (!result.stopped_by_rule) {
        throw NumericalError("oscillation did not complete within the integration horizon");
    }
    return result.events.back().time;
}

}  // namespace fracmech
