#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "fraclayer/core.hpp"
#include "fraclayer/extension.hpp"
#include "fraclayer/layer_solver.hpp"

namespace fraclayer {

// Growth function F in the bound R^2 F(R).
enum class GrowthKind { log, r2logr, constant };

double growth_F(GrowthKind k, double R);
std::string growth_name(GrowthKind k);
GrowthKind growth_from_name(const std::string& name);

// Extensions of a 2-D trace together with phi = d_2 u and sigma = d_1 u / d_2 u.
struct LiouvilleData {
    GridFunction trace;                     // dim 2
    LambdaGrid grid;
    std::vector<double> s;
    std::vector<double> weight;
    double lap_mass = 0.0;
    // [a][(j * n + i2) * n + i1]
    std::vector<std::vector<double>> sheets;
    std::vector<std::vector<double>> grad1;   // d_1 of the sheet
    std::vector<std::vector<double>> phi_sheets;   // d_2 of the sheet
    std::vector<std::vector<double>> sigma_sheets;
    std::vector<std::vector<unsigned char>> mask;  // 1 where phi >= eps_phi
    double eps_phi = 0.0;
    GrowthKind F_kind = GrowthKind::log;

    std::size_t atoms() const { return s.size(); }
};

// Throws ContractViolation if phi < -eps_phi at an interior node.
LiouvilleData liouville_data(const GridFunction& u, const SpectralMeasure& m, const LambdaGrid& grid);

// sum_i w_i d(s_i) int_{C_R} lambda^{1-2s} phi^2 |grad sigma|^2 (+ lap part on B_R)
double liouville_D(const LiouvilleData& data, const SpectralMeasure& m, double R);
// sum_i w_i d(s_i) int_{C_R} lambda^{1-2s} |grad u|^2 (+ lap part)
double liouville_norm(const LiouvilleData& data, const SpectralMeasure& m, double R);

struct GrowthRow {
    double R;
    double mass;
    double bound;    // R^2 F(R)
    double ratio;
};

struct GrowthReport {
    std::vector<GrowthRow> rows;
    std::vector<double> partial_sums;   // sum_{j=1}^{J} 1 / F(2^{j+1}), J = 1..20
    bool diverges;                      // every increment above 1e-3
};

GrowthReport growth_check(const LiouvilleData& data, const SpectralMeasure& m, const std::vector<double>& R_list);

// sup |sum w d (d_2 u Phi_1 - d_1 u Phi_2)| / sup sum w d (|d_2 u Phi_1| + |d_1 u Phi_2|)
// over interior nodes of B_R, Phi_k the flux of the extension of d_k u.
double neumann_combination(const LiouvilleData& data, double R);

struct SymmetryMeasure {
    std::array<double, 2> a;
    double misalignment;
    std::size_t masked;
};

SymmetryMeasure symmetry_measure_2d(const GridFunction& u);

// Field y -> u(Q y) with Q e_2 = a; the background direction becomes e_2.
GridFunction rotate_to_axis(const GridFunction& u, std::array<double, 2> a);

// u_0(a . x) sampled on a 2-D grid with u_0 as background.
GridFunction embed_profile(const GridFunction& profile, std::array<double, 2> a, double X, std::size_t n);

struct Solve2DConfig {
    double X = 6.0;
    std::size_t n = 96;
    std::array<double, 2> direction{1.0, 2.0};
    double tol = 1e-7;
    std::size_t max_iters = 20000;
    std::string init = "axis";    // axis: u_0(x_2), ramp: clamp(x_2 / 2), exact: u_0(a . x)
};

void validate(const Solve2DConfig& cfg);

struct Solve2DResult {
    GridFunction u;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double profile_error = 0.0;   // sup |u - u_0(a . x)|
};

Solve2DResult solve_2d_monotone(const SpectralMeasure& m, const Potential& p, const GridFunction& profile,
                                const Solve2DConfig& cfg);

// Sup over rows of |u(x_1, x_2) - u_0(x_2)| for an axis-aligned field.
double row_profile_error(const GridFunction& u, const GridFunction& profile);

}  // namespace fraclayer
