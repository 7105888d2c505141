#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qvi {

// The solvable regime couples the operator constants (mu, lip) with the
// moving-set sensitivity lambda: lambda + sqrt(1 - mu^2/lip^2) must stay
// strictly below 1. Everything downstream (step-size interval, contraction
// factor) is only defined inside this regime.
inline bool check_lambda_condition(double mu, double lip, double lambda) {
    if (!(mu > 0.0) || !(lip > 0.0) || mu > lip)
        throw std::invalid_argument("check_lambda_condition: need 0 < mu <= lip");
    if (lambda < 0.0)
        throw std::invalid_argument("check_lambda_condition: lambda must be nonnegative");
    const double ratio = mu / lip;
    return lambda + std::sqrt(std::max(0.0, 1.0 - ratio * ratio)) < 1.0;
}

// Open interval of admissible step sizes: |gamma - mu/lip^2| < radius with
// radius = sqrt(mu^2 - lip^2 * lambda * (2 - lambda)) / lip^2. Requires the
// sensitivity condition to hold; the radicand is then strictly positive.
inline std::pair<double, double> gamma_interval(double mu, double lip, double lambda) {
    if (!check_lambda_condition(mu, lip, lambda))
        throw std::invalid_argument(
            "gamma_interval: sensitivity condition fails (lambda + sqrt(1 - mu^2/lip^2) >= 1)");
    const double center = mu / (lip * lip);
    const double radicand = mu * mu - lip * lip * lambda * (2.0 - lambda);
    const double radius = std::sqrt(radicand) / (lip * lip);
    return {center - radius, center + radius};
}

// Per-step contraction factor beta = sqrt(1 - 2*mu*gamma + gamma^2*lip^2) + lambda.
// beta < 1 exactly on the open step-size interval; it equals 1 at both endpoints.
inline double contraction_beta(double mu, double lip, double lambda, double gamma) {
    if (!(mu > 0.0) || !(lip > 0.0) || mu > lip)
        throw std::invalid_argument("contraction_beta: need 0 < mu <= lip");
    if (lambda < 0.0)
        throw std::invalid_argument("contraction_beta: lambda must be nonnegative");
    const double radicand = 1.0 - 2.0 * mu * gamma + gamma * gamma * lip * lip;
    // The quadratic in gamma has minimum 1 - mu^2/lip^2 >= 0; tiny negative
    // values can only be rounding noise.
    return std::sqrt(std::max(0.0, radicand)) + lambda;
}

// Linear rate of the averaged iteration with relaxation weights confined to
// [a, b]: rho = max{ beta^2, b*(1 - beta^2), (1 - beta^2)*(1 - a) }.
// Meaningful (rho < 1) when beta < 1 and 0 < a <= b < 1; beta = 0 is the
// degenerate exact-map case and is allowed.
inline double contraction_rho(double beta, double a, double b) {
    if (!(beta >= 0.0) || !(beta < 1.0))
        throw std::invalid_argument("contraction_rho: need 0 <= beta < 1");
    if (!(a > 0.0) || !(a <= b) || !(b < 1.0))
        throw std::invalid_argument("contraction_rho: need 0 < a <= b < 1");
    const double one_minus_b2 = 1.0 - beta * beta;
    const double c1 = beta * beta;
    const double c2 = b * one_minus_b2;
    const double c3 = one_minus_b2 * (1.0 - a);
    return std::max(c1, std::max(c2, c3));
}

// Certified constants for one problem/solver pairing, validated on
// construction so invalid regimes cannot propagate into a run.
struct ContractionParams {
    double mu;      // strong-monotonicity modulus
    double lip;     // Lipschitz constant
    double lambda;  // feasible-map sensitivity
    double gamma;   // step size, strictly inside the admissible interval
    double a;       // lower bound of relaxation weights
    double b;       // upper bound of relaxation weights

    double beta;  // derived per-step factor
    double rho;   // derived linear rate

    bool operator==(const ContractionParams&) const = default;

    ContractionParams(double mu_, double lip_, double lambda_, double gamma_, double a_, double b_)
        : mu(mu_), lip(lip_), lambda(lambda_), gamma(gamma_), a(a_), b(b_) {
        const auto iv = gamma_interval(mu, lip, lambda);  // throws if the regime is invalid
        if (!(gamma > iv.first) || !(gamma < iv.second))
            throw std::invalid_argument("ContractionParams: gamma " + std::to_string(gamma) +
                                        " outside the open interval (" + std::to_string(iv.first) +
                                        ", " + std::to_string(iv.second) + ")");
        beta = contraction_beta(mu, lip, lambda, gamma);
        rho = contraction_rho(beta, a, b);  // validates a, b
    }
};

}  // namespace qvi
