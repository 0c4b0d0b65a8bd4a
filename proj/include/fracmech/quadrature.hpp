#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracmech::quadrature {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes found by Newton iteration on P_n.
/// Rules are computed once per n and cached (thread-safe).
const Rule& gauss_legendre(std::size_t n);

/// Fixed-order Gauss-Legendre on [a, b].
double fixed(const std::function<double(double)>& f, double a, double b, std::size_t n);

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
};

struct Options {
    double rel_tol = 1e-13;
    double abs_tol = 0.0;
    std::size_t max_intervals = 20000;
    std::size_t order = 15;  // low rule; the high rule uses 2*order points
};

/// Globally adaptive Gauss-Legendre: the interval with the largest
/// |G(2n) - G(n)| is bisected until the summed estimate meets the tolerance.
/// The integrand must be finite on the open interval; endpoint singularities
/// should be removed by substitution beforehand.
Result adaptive(const std::function<double(double)>& f, double a, double b, Options opts = {});

/// Composite rule over consecutive breakpoints.
double composite(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 std::size_t n);

}  // namespace fracmech::quadrature
