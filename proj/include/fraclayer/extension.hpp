#pragma once

#include <cstddef>
#include <vector>

#include "fraclayer/core.hpp"

namespace fraclayer {

// Poisson kernel normalization p_{n,s} = Gamma((n+2s)/2) / (pi^{n/2} Gamma(s)).
double poisson_norm(int n, double s);
// P_s(x, lambda) with r = |x|.
double poisson_kernel(int n, double s, double r, double lambda);
// int_a^inf P_s(z, lambda) dz in one dimension.
double poisson_tail_1d(double s, double a, double lambda);

// lambda[0] = 0 is the trace row; lambda[j] = lambda_min rho^{j-1} for j >= 1.
struct LambdaGrid {
    std::vector<double> lambda;
    double rho = 1.0;

    static LambdaGrid geometric(double lambda_min, double lambda_max, std::size_t rows);
    // lambda_min = h/4, lambda_max = R_max, about 200 rows
    static LambdaGrid standard(double h, double R_max, std::size_t rows = 200);
    std::size_t rows() const { return lambda.size(); }
};

struct ExtensionField {
    GridFunction trace;
    LambdaGrid grid;
    std::vector<double> s;       // per atom
    std::vector<double> weight;  // per atom
    double lap_mass = 0.0;
    // sheets[a][j * n + i]
    std::vector<std::vector<double>> sheets;

    std::size_t atoms() const { return s.size(); }
    double at(std::size_t a, std::size_t j, std::size_t i) const { return sheets[a][j * trace.n() + i]; }
};

ExtensionField extend(const GridFunction& u, const SpectralMeasure& m, const LambdaGrid& grid);

// One sheet row P_s(., lambda) * u on the grid of u.
std::vector<double> extend_row(const GridFunction& u, double s, double lambda);

// sup over interior nodes of lambda |u_xx + (u_tt - 2s u_t) / lambda^2|,
// t = log lambda, divided by sup |grad u|.
double weighted_pde_residual(const ExtensionField& f, std::size_t atom);
double weighted_pde_residual(const ExtensionField& f, const std::vector<double>& sheet, double s);

struct FluxResult {
    GridFunction flux;     // -lim lambda^{1-2s} d_lambda u, no d(s) factor
    double rel_change;     // disagreement of the two smallest-row extrapolations
    bool converged;        // rel_change <= 1e-3
};

FluxResult neumann_flux(const ExtensionField& f, std::size_t atom);

// Sup-norm gap between the trace and the sheet extrapolated to lambda = 0
// from three rows, fit in {1, lambda^{2s}, lambda^2}; nodes near the box edge skipped.
double trace_error(const ExtensionField& f, std::size_t atom);

struct Calibration {
    double d;
    double fit_residual;
    double holdout_residual;
    bool trusted;
};

Calibration calibrate_d(double s);

double extended_kinetic(const ExtensionField& f, const SpectralMeasure& m, double R);

struct CylinderBallRow {
    double R;
    double K_ext;
    double K_ball;
    double diff;
    double phi_ref;
    double ratio;
};

std::vector<CylinderBallRow> cylinder_ball_compare(const ExtensionField& f, const GridFunction& u,
                                                   const SpectralMeasure& m, const Potential& p,
                                                   const std::vector<double>& R_list);

struct SheetBounds {
    double s;
    double sup_sheet;
    double sup_trace;
    bool max_ok;
    double sup_grad_x;
    double sup_trace_grad;
    bool grad_x_ok;
    double lambda_grad;   // sup over rows of lambda |grad u|
};

std::vector<SheetBounds> gradient_bound_check(const ExtensionField& f);

// Sup-norm of sum_i w_i d(s_i) flux_i + lap (-Delta_h) u + W'(u) over |x| <= R.
double neumann_closure(const ExtensionField& f, const Potential& p, double R);

}  // namespace fraclayer
