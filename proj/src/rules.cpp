#include "fraclayer/rules.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "fraclayer/errors.hpp"

namespace fraclayer {

namespace {

struct GaussNodes {
    std::array<double, 16> x;
    std::array<double, 16> w;
};

const GaussNodes& gauss16() {
    static const GaussNodes nodes = [] {
        using G = boost::math::quadrature::gauss<double, 16>;
        GaussNodes g{};
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = 0; i < 8; ++i) {
            g.x[2 * i] = 0.5 * (1.0 - a[i]);
            g.x[2 * i + 1] = 0.5 * (1.0 + a[i]);
            g.w[2 * i] = 0.5 * wt[i];
            g.w[2 * i + 1] = 0.5 * wt[i];
        }
        return g;
    }();
    return nodes;
}

}  // namespace

ProductRule::ProductRule(const KernelSpec& spec, std::size_t K) : K_(K), tail_(spec.tail) {
    if (K < 2) throw DomainError("product rule: K must be at least 2");
    if (spec.q <= 0.0) {
        first_ = {spec.moment_p, 0.0};
    } else {
        const double P = std::pow(2.0, spec.p);
        const double D = std::pow(2.0, spec.q) - P;
        first_[1] = (spec.moment_q - spec.moment_p) / D;
        first_[0] = spec.moment_p - P * first_[1];
    }

    const GaussNodes& g = gauss16();
    iv_.assign(K, {0.0, 0.0, 0.0, 0.0});
    for (std::size_t k = 1; k < K; ++k) {
        std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
        for (std::size_t m = 0; m < 16; ++m) {
            const double t = g.x[m];
            const double kw = g.w[m] * spec.kernel(static_cast<double>(k) + t);
            c[0] += kw * (-t * (t - 1.0) * (t - 2.0) / 6.0);
            c[1] += kw * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0);
            c[2] += kw * (-(t + 1.0) * t * (t - 2.0) / 2.0);
            c[3] += kw * ((t + 1.0) * t * (t - 1.0) / 6.0);
        }
        iv_[k] = c;
    }

    w_.assign(K + 2, 0.0);
    w_[1] += first_[0];
    w_[2] += first_[1];
    for (std::size_t k = 1; k < K; ++k)
        for (std::size_t m = 0; m < 4; ++m) w_[k - 1 + m] += iv_[k][m];
    w_[0] = 0.0;
}

ProductRule power_rule(double s, std::size_t K, bool even) {
    KernelSpec spec;
    const double e = -1.0 - 2.0 * s;
    spec.kernel = [e](double t) { return std::pow(t, e); };
    spec.p = 2.0;
    spec.q = even ? 4.0 : 3.0;
    spec.moment_p = 1.0 / (spec.p - 2.0 * s);
    spec.moment_q = 1.0 / (spec.q - 2.0 * s);
    spec.tail = std::pow(static_cast<double>(K), -2.0 * s) / (2.0 * s);
    return ProductRule(spec, K);
}

}  // namespace fraclayer
