#include <cmath>

#include <gtest/gtest.h>

#include "fraclayer/errors.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/operator2d.hpp"
#include "fraclayer/parallel.hpp"
#include "oracle_values.hpp"

using namespace fraclayer;

namespace {

std::size_t node(const GridFunction& u, double x) { return static_cast<std::size_t>(std::lround((x + u.half_width()) / u.h())); }

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

GridFunction arctan_layer(double X, std::size_t n) {
    return GridFunction::sample(X, n, Tail::layer, [](double x) { return 2.0 / kPi * std::atan(x); });
}

}  // namespace

TEST(Spectral, CosineSymbolIsExact) {
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        for (int k : {1, 2, 4}) {
            const GridFunction u = GridFunction::sample(kPi, 256, Tail::periodic, [&](double x) { return std::cos(k * x); });
            GridFunction e = u;
            for (double& v : e.values()) v *= std::pow(k, 2.0 * s);
            EXPECT_LT(sup_diff(frac_laplacian_spectral(u, s), e), 1e-11) << s << " " << k;
        }
    }
}

TEST(Spectral, ConstantsAndSums) {
    const GridFunction one = GridFunction::sample(kPi, 64, Tail::periodic, [](double) { return 1.0; });
    const GridFunction L1 = frac_laplacian_spectral(one, 0.4);
    for (double v : L1.values()) EXPECT_NEAR(v, 0.0, 1e-14);
    const GridFunction u =
        GridFunction::sample(kPi, 128, Tail::periodic, [](double x) { return std::cos(x) + std::cos(3.0 * x); });
    const GridFunction L = frac_laplacian_spectral(u, 0.3);
    for (std::size_t i = 0; i < u.n(); ++i)
        EXPECT_NEAR(L[i], std::cos(u.x(i)) + std::pow(3.0, 0.6) * std::cos(3.0 * u.x(i)), 1e-12);
    EXPECT_THROW(frac_laplacian_spectral(arctan_layer(10, 64), 0.5), DomainError);
    EXPECT_THROW(frac_laplacian_spectral(GridFunction(kPi, 96, Tail::periodic), 0.5), DomainError);
}

TEST(Quadrature, GaussianMatchesHypergeometricForm) {
    const GridFunction g = GridFunction::sample(30.0, 1201, Tail::zero, [](double x) { return std::exp(-x * x); });
    for (double s : {0.25, 0.5, 0.75}) {
        const GridFunction L = frac_laplacian_quadrature(g, s);
        for (const auto& p : oracle::kGaussLaplacian)
            if (p.s == s) EXPECT_NEAR(L[node(g, p.x)], p.value, 1e-4) << "s=" << s << " x=" << p.x;
    }
}

TEST(Quadrature, TruncatedArctanMatchesDirectIntegral) {
    const GridFunction u = arctan_layer(50.0, 2001);
    for (const auto& p : oracle::kArctanLaplacian)
        EXPECT_NEAR(frac_laplacian_quadrature(u, p.s, node(u, p.x)), p.value, 1e-5) << p.s << " " << p.x;
}

TEST(Quadrature, PeierlsNabarroClosedForm) {
    const GridFunction u = arctan_layer(200.0, 4096);
    const GridFunction L = frac_laplacian_quadrature(u, 0.5);
    double err = 0.0;
    for (std::size_t i = 0; i < u.n(); ++i)
        if (std::abs(u.x(i)) <= 10.0) err = std::max(err, std::abs(L[i] - std::sin(kPi * u[i]) / kPi));
    EXPECT_LT(err, 1e-4);
}

TEST(Quadrature, ConstantsAreAnnihilated) {
    const GridFunction c = GridFunction::sample(10.0, 201, Tail::constant, [](double) { return 0.7; });
    for (double s : {0.05, 0.5, 0.95}) {
        const GridFunction L = frac_laplacian_quadrature(c, s);
        for (double v : L.values()) EXPECT_NEAR(v, 0.0, 1e-12 * 0.7);
    }
}

TEST(Quadrature, RangeAndTailErrors) {
    const GridFunction u = arctan_layer(10.0, 201);
    EXPECT_THROW(frac_laplacian_quadrature(u, 0.99), DomainError);
    EXPECT_THROW(frac_laplacian_quadrature(u, 0.01), DomainError);
    EXPECT_THROW(frac_laplacian_quadrature(u, 0.5, 500), DomainError);
}

TEST(Quadrature, EvenInputGivesEvenOutput) {
    const GridFunction u = GridFunction::sample(20.0, 401, Tail::constant, [](double x) { return 1.0 / (1.0 + x * x); });
    const GridFunction L = frac_laplacian_quadrature(u, 0.35);
    for (std::size_t i = 0; i < u.n(); ++i) EXPECT_NEAR(L[i], L[u.n() - 1 - i], 1e-13);
}

TEST(Backends, ConsistentOnBandLimitedInput) {
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const GridFunction u = GridFunction::sample(kPi, 2048, Tail::periodic,
                                                    [](double x) { return std::cos(x) + 0.3 * std::cos(5.0 * x); });
        EXPECT_LT(backend_consistency(u, s), 1e-3) << s;
    }
    const GridFunction one = GridFunction::sample(kPi, 256, Tail::periodic, [](double) { return 1.0; });
    EXPECT_EQ(backend_consistency(one, 0.5), 0.0);
}

TEST(ApplyL, MixtureOnUnitFrequency) {
    OperatorSpec spec{SpectralMeasure({{0.3, 0.5}, {0.7, 0.5}}, 0.0), 0.0, Backend::spectral};
    const GridFunction u = GridFunction::sample(kPi, 256, Tail::periodic, [](double x) { return std::cos(x); });
    EXPECT_LT(sup_diff(apply_L(spec, u), u), 1e-12);
    spec.delta = 1.0;
    const GridFunction u2 = GridFunction::sample(kPi, 256, Tail::periodic, [](double x) { return std::cos(2.0 * x); });
    GridFunction e = u2;
    for (double& v : e.values()) v *= 4.0;
    EXPECT_LT(sup_diff(apply_L(spec, u2), e), 4.0 * 4.0 * u2.h() * u2.h());
}

TEST(ApplyL, LinearAndTranslationEquivariant) {
    OperatorSpec spec{SpectralMeasure({{0.3, 0.6}}, 0.4), 0.1, Backend::spectral};
    const std::size_t n = 128;
    const GridFunction u = GridFunction::sample(kPi, n, Tail::periodic, [](double x) { return std::exp(std::sin(x)); });
    const GridFunction v = GridFunction::sample(kPi, n, Tail::periodic, [](double x) { return std::cos(3.0 * x); });
    GridFunction w = u;
    for (std::size_t i = 0; i < n; ++i) w[i] = 2.0 * u[i] - 3.0 * v[i];
    const GridFunction Lu = apply_L(spec, u), Lv = apply_L(spec, v), Lw = apply_L(spec, w);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(Lw[i], 2.0 * Lu[i] - 3.0 * Lv[i], 1e-12);

    GridFunction shifted = u;
    for (std::size_t i = 0; i < n; ++i) shifted[i] = u[(i + 5) % n];
    const GridFunction Ls = apply_L(spec, shifted);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(Ls[i], Lu[(i + 5) % n], 1e-12);
}

TEST(ApplyL, PeierlsNabarroThroughQuadratureSpec) {
    const OperatorSpec spec{SpectralMeasure::single(0.5), 0.0, Backend::quadrature};
    const GridFunction u = arctan_layer(200.0, 4096);
    const GridFunction L = apply_L(spec, u);
    for (std::size_t i = 0; i < u.n(); ++i)
        if (std::abs(u.x(i)) <= 10.0) EXPECT_NEAR(L[i], std::sin(kPi * u[i]) / kPi, 1e-4);
}

TEST(ApplyL, DeterministicAcrossThreadCounts) {
    const OperatorSpec spec{SpectralMeasure({{0.3, 0.5}, {0.7, 0.5}}, 0.0), 0.0, Backend::quadrature};
    const GridFunction u = arctan_layer(40.0, 801);
    set_thread_count(1);
    const GridFunction a = apply_L(spec, u);
    set_thread_count(4);
    const GridFunction b = apply_L(spec, u);
    set_thread_count(1);
    EXPECT_EQ(a.values(), b.values());
}

TEST(QuadratureOperator, MatchesPointwiseQuadrature) {
    const SpectralMeasure m = SpectralMeasure::single(0.4);
    const GridFunction u = arctan_layer(20.0, 401);
    const QuadratureOperator1D A(m, 0.0, u.h(), u.n());
    std::vector<double> out(u.n());
    A.apply(u.values().data(), -1.0, 1.0, out.data());
    const GridFunction L = frac_laplacian_quadrature(u, 0.4);
    for (std::size_t i = 0; i < u.n(); ++i) EXPECT_NEAR(out[i], L[i], 1e-10);
    EXPECT_GT(A.symbol_max(), 0.0);
}

TEST(PairwiseSum, IndependentOfThreadCount) {
    std::vector<double> v(100003);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(double(i)) * 1e-3 + 1.0 / double(i + 1);
    set_thread_count(1);
    const double a = pairwise_sum(v);
    set_thread_count(4);
    const double b = pairwise_sum(v);
    set_thread_count(1);
    EXPECT_EQ(a, b);
}

TEST(Operator2D, EmbeddedLayerMatchesOneDimensionalOperator) {
    // for u(x) = g(a.x) the 2-D operator equals the 1-D operator on g along a
    const GridFunction g = arctan_layer(100.0, 4001);
    auto bg = std::make_shared<Background>();
    bg->profile = std::make_shared<GridFunction>(g);
    bg->direction = {0.6, 0.8};
    const double X = 4.0;
    const std::size_t n = 33;
    GridFunction u = GridFunction::make_2d(X, n, Tail::layer, bg);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) u.at(i1, i2) = g.eval(0.6 * u.x(i1) + 0.8 * u.x(i2));
    const SpectralMeasure m = SpectralMeasure::single(0.5);
    const GridFunction L = apply_L_2d(m, 0.0, u);
    double err = 0.0;
    for (std::size_t i2 = 4; i2 + 4 < n; ++i2)
        for (std::size_t i1 = 4; i1 + 4 < n; ++i1) {
            const double t = g.eval(0.6 * u.x(i1) + 0.8 * u.x(i2));
            err = std::max(err, std::abs(L.at(i1, i2) - std::sin(kPi * t) / kPi));
        }
    EXPECT_LT(err, 2e-2);
}
