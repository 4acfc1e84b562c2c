#include "fraclayer/special.hpp"

#include <array>
#include <cmath>

#include <boost/math/special_functions/zeta.hpp>

#include "fraclayer/core.hpp"
#include "fraclayer/errors.hpp"

namespace fraclayer {

namespace {

// Lanczos coefficients, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {
    double a = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) a += kLanczos[k] / (z + static_cast<double>(k));
    return a;
}

}  // namespace

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x)) throw DomainError("gamma: pole at non-positive integer");
    if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_sum(z);
}

double lgamma_fn(double x) {
    if (x <= 0.0) throw DomainError("lgamma: argument must be positive");
    if (x < 0.5) return std::log(kPi / std::abs(std::sin(kPi * x))) - lgamma_fn(1.0 - x);
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double dirichlet_beta(double s) {
    if (!(s > 0.0)) throw DomainError("dirichlet_beta: s must be positive");
    // Cohen, Rodriguez Villegas and Zagier acceleration of an alternating series.
    constexpr int n = 48;
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = 0.5 * (d + 1.0 / d);
    double b = -1.0;
    double c = -d;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        sum += c * std::pow(2.0 * k + 1.0, -s);
        b = static_cast<double>(k + n) * static_cast<double>(k - n) * b /
            ((k + 0.5) * (k + 1.0));
    }
    return sum / d;
}

double lattice_zeta2(double sigma) {
    const double half = 0.5 * sigma;
    if (half == 1.0) throw DomainError("lattice_zeta2: pole at sigma = 2");
    return 4.0 * boost::math::zeta(half) * dirichlet_beta(half);
}

}  // namespace fraclayer
