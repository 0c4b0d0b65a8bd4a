#pragma once

// Special functions needed by the oscillator solution: log-gamma, complete
// and incomplete Beta, its inverse, and the Gauss hypergeometric family
// F(mu, 1 - nu; mu + 1; x).
//
// All routines are pure and reentrant.

namespace fracmech::specfun {

/// Argument bundle for the incomplete Beta function B_x(a, b).
struct BetaArgs {
    double a;
    double b;
    double x;
};

/// ln Gamma(x) for x > 0 (Lanczos approximation, g = 671/128, 15 terms).
double ln_gamma(double x);

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta(double a, double b);

/// Unregularized incomplete Beta B_x(a, b) = int_0^x y^(a-1) (1-y)^(b-1) dy.
double inc_beta(const BetaArgs& args);
inline double inc_beta(double a, double b, double x) { return inc_beta(BetaArgs{a, b, x}); }

/// Regularized form I_x(a, b) = B_x(a, b) / B(a, b).
double inc_beta_regularized(double a, double b, double x);

/// x in [0, 1] with B_x(a, b) = target, for 0 <= target <= B(a, b).
double inv_inc_beta(double a, double b, double target);

/// F(mu, 1 - nu; mu + 1; x) = mu B_x(mu, nu) / x^mu, 0 <= x <= 1.
double hyp2f1_beta_family(double mu, double nu, double x);

/// Gauss 2F1(a, b; c; x) restricted to c = a + 1, a > 0, b < 1 and
/// 0 <= x <= 1; anything else raises DomainError.
double hyp2f1(double a, double b, double c, double x);

}  // namespace fracmech::specfun
