#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fraclayer/energy.hpp"
#include "fraclayer/errors.hpp"
#include "fraclayer/layer_solver.hpp"
#include "fraclayer/operator.hpp"

using namespace fraclayer;

namespace {

const LayerProfile& pn_layer() {
    static const LayerProfile lp = continuation_solve(SolverConfig{}, SpectralMeasure::single(0.5), Potential::peierls_nabarro());
    return lp;
}

const LayerProfile& mix_layer() {
    static const LayerProfile lp =
        continuation_solve(SolverConfig{}, SpectralMeasure({{0.3, 0.5}, {0.7, 0.5}}, 0.0), Potential::quartic());
    return lp;
}

}  // namespace

TEST(Continuation, RecoversArctanLayer) {
    const LayerProfile& lp = pn_layer();
    EXPECT_TRUE(lp.converged);
    EXPECT_EQ(lp.monotone_defect, 0.0);
    EXPECT_LT(lp.odd_defect, 1e-3);
    double err = 0.0;
    for (std::size_t i = 0; i < lp.u.n(); ++i) err = std::max(err, std::abs(lp.u[i] - 2.0 / kPi * std::atan(lp.u.x(i))));
    EXPECT_LT(err, 2e-2);
    EXPECT_EQ(lp.limit_left, -1.0);
    EXPECT_EQ(lp.limit_right, 1.0);
    ASSERT_EQ(lp.stages.size(), 3u);
    EXPECT_EQ(lp.stages.back().delta, 0.0);
}

TEST(Continuation, EnergyDecreasesAlongEachStage) {
    const LayerProfile& lp = pn_layer();
    for (std::size_t k = 1; k < lp.log.size(); ++k)
        if (lp.log[k].stage == lp.log[k - 1].stage) EXPECT_LE(lp.log[k].energy, lp.log[k - 1].energy);
    for (double v : lp.u.values()) EXPECT_LE(std::abs(v), 1.0);
}

TEST(Continuation, QuarticMixtureIsOddMonotone) {
    const LayerProfile& lp = mix_layer();
    EXPECT_TRUE(lp.converged);
    EXPECT_EQ(lp.monotone_defect, 0.0);
    EXPECT_LT(lp.odd_defect, 1e-3);
    EXPECT_LT(equation_residual(lp.u, SpectralMeasure({{0.3, 0.5}, {0.7, 0.5}}, 0.0), Potential::quartic(), 2.0), 1e-3);
}

TEST(Continuation, WarmRestartIsAFixedPoint) {
    const LayerProfile& lp = pn_layer();
    SolverConfig cfg;
    const LayerProfile again =
        solve_truncated(SpectralMeasure::single(0.5), Potential::peierls_nabarro(), 0.0, 100.0, lp.u, cfg);
    EXPECT_LE(again.stages[0].iterations, 5u);
    double change = 0.0;
    for (std::size_t i = 0; i < lp.u.n(); ++i) change = std::max(change, std::abs(again.u[i] - lp.u[i]));
    EXPECT_LT(change, 1e-4);
}

TEST(Continuation, SingleStageEqualsTruncatedSolve) {
    SolverConfig cfg;
    cfg.R_schedule = {10.0};
    cfg.delta_schedule = {0.01};
    const SpectralMeasure m = SpectralMeasure::single(0.4);
    const LayerProfile a = continuation_solve(cfg, m, Potential::quartic());
    const LayerProfile b = solve_truncated(m, Potential::quartic(), 0.01, 10.0, ramp_profile(10.0, cfg.h), cfg);
    EXPECT_EQ(a.u.values(), b.u.values());
}

TEST(Continuation, WeakFormOnRandomTestFunctions) {
    const LayerProfile& lp = mix_layer();
    const SpectralMeasure m({{0.3, 0.5}, {0.7, 0.5}}, 0.0);
    const Potential p = Potential::quartic();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> c(-20.0, 20.0), w(1.0, 5.0);
    for (int k = 0; k < 20; ++k) {
        const double c0 = c(rng), w0 = w(rng);
        // smooth, supported in |x - c0| < w0
        const GridFunction xi = GridFunction::sample(lp.u.half_width(), lp.u.n(), Tail::zero, [&](double x) {
            const double t = (x - c0) / w0;
            return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
        });
        const double R = 60.0;
        const double a = scalar_product(lp.u, xi, m, R);
        double b = 0.0;
        for (std::size_t i = 0; i < xi.n(); ++i) b += lp.u.h() * p.dW(lp.u[i]) * xi[i];
        EXPECT_LT(std::abs(a + b) / (std::abs(a) + std::abs(b)), 1e-2) << c0 << " " << w0;
    }
}

TEST(Continuation, SecondDifferencesStableUnderRefinement) {
    SolverConfig coarse;
    coarse.R_schedule = {25.0};
    coarse.delta_schedule = {0.0};
    SolverConfig fine = coarse;
    fine.h = 0.05;
    const SpectralMeasure m = SpectralMeasure::single(0.5);
    const double a = continuation_solve(coarse, m, Potential::quartic()).stages.back().max_second_difference;
    const double b = continuation_solve(fine, m, Potential::quartic()).stages.back().max_second_difference;
    EXPECT_LT(std::max(a, b) / std::min(a, b), 1.5);
}

TEST(Sliding, Diagnostics) {
    const GridFunction a = GridFunction::sample(10.0, 201, Tail::layer, [](double x) { return 2.0 / kPi * std::atan(x); });
    const SlidingResult r = sliding_check(a);
    EXPECT_EQ(r.monotone_defect, 0.0);
    EXPECT_LT(r.odd_defect, 1e-12);
    const GridFunction q = GridFunction::sample(1.0, 21, Tail::zero, [](double x) { return x * x; });
    EXPECT_GT(sliding_check(q).monotone_defect, 0.0);
}

TEST(Competitor, TrapezoidAndEnergyGrowth) {
    for (double x = -12.0; x <= 12.0; x += 0.01) {
        EXPECT_LE(std::abs(competitor_psi(x + 0.01, 10.0) - competitor_psi(x, 10.0)), 0.01 + 1e-12);
        EXPECT_LE(std::abs(competitor_psi(x, 10.0)), 1.0);
    }
    const SpectralMeasure m = SpectralMeasure::single(0.5);
    double prev = INFINITY;
    double lo = INFINITY, hi = 0.0;
    for (double R : {8.0, 16.0, 32.0, 64.0}) {
        const CompetitorResult c = competitor_energy_test(m, Potential::quartic(), R);
        EXPECT_NEAR(c.E_trivial_lower / R, 0.5, 1e-15);
        EXPECT_LT(c.E_competitor / R, prev);
        prev = c.E_competitor / R;
        lo = std::min(lo, c.E_competitor / phi(1, 0.5, R));
        hi = std::max(hi, c.E_competitor / phi(1, 0.5, R));
    }
    EXPECT_LT(hi / lo, 10.0);
    EXPECT_THROW(competitor_energy_test(m, Potential::quartic(), 3.0), DomainError);
}

TEST(EnergyScan, PeierlsNabarroGrowsLogarithmically) {
    const LayerProfile& lp = pn_layer();
    const std::vector<ScanRow> rows = energy_scaling_scan(lp, SpectralMeasure::single(0.5), Potential::peierls_nabarro(),
                                                          {4.0, 8.0, 16.0, 32.0, 64.0});
    double lo = INFINITY, hi = 0.0;
    for (const ScanRow& r : rows) {
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    EXPECT_LT(hi / lo, 10.0);
    EXPECT_NEAR(fit_growth_exponent(rows).exponent, 0.0, 0.1);
    EXPECT_THROW(energy_scaling_scan(lp, SpectralMeasure::single(0.5), Potential::peierls_nabarro(), {99.0}), DomainError);
}

TEST(EnergyScan, FitRecoversSyntheticExponent) {
    for (double pe : {0.4, 0.0, -0.5}) {
        std::vector<ScanRow> rows;
        for (double R = 4.0; R <= 128.0; R *= 2.0) {
            const double f = pe == 0.0 ? std::log(R) : (std::pow(R, pe) - 1.0) / pe;
            rows.push_back({R, 1.3 + 0.7 * f, 1.0, 0.0, {}});
        }
        const GrowthFit g = fit_growth_exponent(rows);
        EXPECT_NEAR(g.exponent, pe, 2e-3);
        EXPECT_NEAR(g.A, 1.3, 1e-2);
        EXPECT_NEAR(g.B, 0.7, 1e-2);
    }
}

TEST(SolverConfig, Validation) {
    SolverConfig c;
    EXPECT_NO_THROW(validate(c));
    c.delta_schedule = {0.001, 0.01};
    EXPECT_THROW(validate(c), ConfigError);
    c = SolverConfig{};
    c.R_schedule = {};
    EXPECT_THROW(validate(c), ConfigError);
    c = SolverConfig{};
    c.tol = 0.0;
    EXPECT_THROW(validate(c), ConfigError);
    c = SolverConfig{};
    c.h = -0.1;
    EXPECT_THROW(validate(c), ConfigError);
}
