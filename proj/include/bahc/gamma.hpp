#pragma once

#include <cmath>
#include <numbers>

#include "bahc/error.hpp"

namespace bahc {

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline double log_gamma_lanczos(double x) {
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
    const double t = x + kLanczosG - 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x - 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace detail

// ln Gamma(x) for x > 0. Reflection handles (0, 0.5).
inline double log_gamma(double x) {
    if (!(x > 0.0))
        throw InvalidArgumentError("log_gamma requires a positive argument, got " + std::to_string(x));
    if (x < 0.5) {
        const double pi = std::numbers::pi;
        return std::log(pi / std::sin(pi * x)) - detail::log_gamma_lanczos(1.0 - x);
    }
    return detail::log_gamma_lanczos(x);
}

// ln Z(d, n) = (nd/2) ln 2 + d(d-1)/4 ln pi + sum_{d'=1..d} lnGamma((n+1-d')/2),
// the log Wishart normalization constant. Requires n > d - 1.
inline double log_wishart_z(int d, double n) {
    if (d < 1) throw InvalidArgumentError("log_wishart_z: dimension must be >= 1");
    if (!(n > d - 1))
        throw InvalidDegreesOfFreedomError("log_wishart_z: need n > d - 1, got n = " +
                                           std::to_string(n) + ", d = " + std::to_string(d));
    double s = 0.0;
    for (int dp = 1; dp <= d; ++dp) s += log_gamma((n + 1.0 - dp) / 2.0);
    return (n * d / 2.0) * std::numbers::ln2 +
           (d * (d - 1) / 4.0) * std::log(std::numbers::pi) + s;
}

}  // namespace bahc
