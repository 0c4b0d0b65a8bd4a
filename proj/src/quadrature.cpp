#include "fracmech/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

namespace fracmech::quadrature {

namespace {

Rule build_rule(std::size_t n) {
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const Rule& gauss_legendre(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(build_rule(n));
    return *slot;
}

double fixed(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const Rule& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

namespace {

struct Interval {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval evaluate(const std::function<double(double)>& f, double a, double b, std::size_t order) {
    const double lo = fixed(f, a, b, order);
    const double hi = fixed(f, a, b, 2 * order);
    return {a, b, hi, std::abs(hi - lo)};
}

}  // namespace

Result adaptive(const std::function<double(double)>& f, double a, double b, Options opts) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Interval> heap;
    Interval first = evaluate(f, a, b, opts.order);
    double value = first.value;
    double error = first.error;
    heap.push(first);
    while (true) {
        const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
        if (error <= target) {
            out.converged = true;
            break;
        }
        if (heap.size() >= opts.max_intervals) break;
        const Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        const Interval left = evaluate(f, worst.a, mid, opts.order);
        const Interval right = evaluate(f, mid, worst.b, opts.order);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the running-update rounding.
    out.value = 0.0;
    out.error = 0.0;
    out.intervals = heap.size();
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error += heap.top().error;
        heap.pop();
    }
    if (!out.converged) {
        out.converged = out.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
    }
    return out;
}

double composite(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        sum += fixed(f, breakpoints[i], breakpoints[i + 1], n);
    }
    return sum;
}

}  // namespace fracmech::quadrature
