#pragma once

#include <cstddef>
#include <vector>

#include "fraclayer/core.hpp"

namespace fraclayer {

enum class Backend { quadrature, spectral };

struct OperatorSpec {
    SpectralMeasure measure;
    double delta = 0.0;
    Backend backend = Backend::quadrature;
};

// (-Delta)^s u at one node, singular-integral quadrature.
double frac_laplacian_quadrature(const GridFunction& u, double s, std::size_t x_index);

// (-Delta)^s u at every node. Periodic inputs sum images over 64 periods.
GridFunction frac_laplacian_quadrature(const GridFunction& u, double s);

// Fourier-symbol backend; periodic grids with power-of-two size.
GridFunction frac_laplacian_spectral(const GridFunction& u, double s);

// Second-order centered difference (-Delta_h) u, 1-D or 2-D.
GridFunction neg_laplacian_h(const GridFunction& u);

GridFunction apply_L(const OperatorSpec& spec, const GridFunction& u);

double backend_consistency(const GridFunction& u, double s);

// Precomputed 1-D quadrature form of
//   delta (-Delta_h) + (1 - delta) [sum_i w_i (-Delta)^{s_i} + lap (-Delta_h)]
// as  (Au)_i = sum_j W_j (2u_i - u_{i+j} - u_{i-j}) + T (2u_i - uL - uR).
class QuadratureOperator1D {
public:
    QuadratureOperator1D(const SpectralMeasure& m, double delta, double h, std::size_t n,
                         bool periodic = false, bool include_local = true);

    std::size_t n() const { return n_; }
    double h() const { return h_; }

    // Non-periodic apply with exterior constants uL, uR.
    void apply(const double* u, double uL, double uR, double* out) const;
    double apply_at(const double* u, double uL, double uR, std::size_t i) const;
    // Periodic apply.
    void apply_periodic(const double* u, double* out) const;

    // Upper bound of the discrete symbol, used to pick stable step sizes.
    double symbol_max() const;

private:
    std::size_t n_;
    double h_;
    bool periodic_;
    std::vector<double> W_;  // W_[j], j = 0..K+1 (or folded, j = 0..n-1)
    double T_ = 0.0;
};

}  // namespace fraclayer
