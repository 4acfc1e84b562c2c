#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fraclayer/core.hpp"
#include "fraclayer/energy.hpp"

namespace fraclayer {

struct SolverConfig {
    std::vector<double> delta_schedule{1e-2, 1e-3, 0.0};
    std::vector<double> R_schedule{25.0, 50.0, 100.0};
    double h = 0.1;            // grid spacing of every stage
    double step = 0.0;         // 0 selects a step from the operator norm
    double tol = 1e-6;
    std::size_t max_iters = 20000;
    double box_lo = -1.0;
    double box_hi = 1.0;
};

void validate(const SolverConfig& cfg);

struct IterRecord {
    std::size_t stage;
    std::size_t iter;
    double energy;
    double grad_norm;
    double monotone_defect;
    double odd_defect;
};

struct StageRecord {
    std::size_t stage;
    double R;
    double delta;
    std::size_t iterations;
    double grad_norm;
    double energy;
    bool converged;
    bool flat;       // stopped by the stagnation rule
    double max_second_difference;
};

struct LayerProfile {
    GridFunction u;
    double residual = 0.0;
    double monotone_defect = 0.0;
    double odd_defect = 0.0;
    double limit_left = -1.0;
    double limit_right = 1.0;
    bool converged = false;
    std::vector<StageRecord> stages;
    std::vector<IterRecord> log;
};

struct SlidingResult {
    double monotone_defect;
    double odd_defect;
};

SlidingResult sliding_check(const GridFunction& u);

// Pinned grid on [-R, R] with spacing h holding the clamped ramp x/R.
GridFunction ramp_profile(double R, double h);

LayerProfile solve_truncated(const SpectralMeasure& m, const Potential& p, double delta, double R,
                             const GridFunction& init, const SolverConfig& cfg);

LayerProfile continuation_solve(const SolverConfig& cfg, const SpectralMeasure& m, const Potential& p);

// Sup-norm of L u + W'(u) over nodes of the box at distance >= margin from its edge.
double equation_residual(const GridFunction& u, const SpectralMeasure& m, const Potential& p,
                         double margin = 0.0);

struct CompetitorResult {
    double E_trivial_lower;
    double E_competitor;
};

// Trapezoid psi: 1 on |x| <= R-2, R-1-|x| on R-2 <= |x| <= R, -1 beyond.
double competitor_psi(double x, double R);

CompetitorResult competitor_energy_test(const SpectralMeasure& m, const Potential& p, double R,
                                        const GridFunction* u = nullptr);

struct ScanRow {
    double R;
    double energy;
    double phi_ref;
    double ratio;
    EnergyBreakdown breakdown;
};

std::vector<ScanRow> energy_scaling_scan(const LayerProfile& u, const SpectralMeasure& m, const Potential& p,
                                         const std::vector<double>& R_list);

struct GrowthFit {
    double exponent;   // p in E = A + B (R^p - 1) / p
    double A;
    double B;
    double rms;
};

// Least-squares fit of the energy growth exponent over a scan.
GrowthFit fit_growth_exponent(const std::vector<ScanRow>& rows);

}  // namespace fraclayer
