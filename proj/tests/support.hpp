#pragma once

// Test-only reference values computed independently of the library:
// long-double double-exponential quadrature (Boost.Math) and direct
// hypergeometric series.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

inline double rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

// int_0^x y^(a-1) (1-y)^(b-1) dy. The two-argument integrand receives the
// signed distance to the nearer endpoint, so both factors keep full
// precision where they blow up.
inline long double inc_beta(long double a, long double b, long double x) {
    if (x <= 0.0L) return 0.0L;
    boost::math::quadrature::tanh_sinh<long double> ts;
    const long double one_minus_x = 1.0L - x;
    auto f = [&](long double y, long double yc) -> long double {
        const long double lo = yc < 0.0L ? -yc : y;
        const long double hi = yc > 0.0L ? one_minus_x + yc : 1.0L - y;
        if (lo <= 0.0L || hi <= 0.0L) return 0.0L;
        return std::pow(lo, a - 1.0L) * std::pow(hi, b - 1.0L);
    };
    return ts.integrate(f, 0.0L, x, 1e-18L);
}

inline long double beta(long double a, long double b) { return inc_beta(a, b, 1.0L); }

// ln of int_0^inf t^(x-1) e^-t dt.
inline long double ln_gamma(long double x) {
    boost::math::quadrature::exp_sinh<long double> es;
    auto f = [&](long double t) -> long double {
        if (t <= 0.0L) return 0.0L;
        return std::exp((x - 1.0L) * std::log(t) - t);
    };
    return std::log(es.integrate(f, 0.0L, std::numeric_limits<long double>::infinity(), 1e-18L));
}

// Gauss series sum (a)_k (b)_k / ((c)_k k!) x^k, |x| < 1.
inline long double hyp2f1_series(long double a, long double b, long double c, long double x) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 0; k < 100000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x;
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum)) break;
    }
    return sum;
}

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
