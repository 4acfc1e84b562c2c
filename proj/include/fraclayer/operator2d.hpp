#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fraclayer/core.hpp"

namespace fraclayer {

// Fractional part of the mixture acting on fields that vanish outside the
// n x n box, trapezoid rule with a lattice-zeta correction of the
// singular cell:
//   (A v)_i = D v_i - sum_{k != 0} K_k v_{i+k} + E (h^2 Delta_h v)_i
class CompactOperator2D {
public:
    CompactOperator2D(const SpectralMeasure& m, double delta, double h, std::size_t n);

    std::size_t n() const { return n_; }
    void apply(const std::vector<double>& v, std::vector<double>& out) const;
    double symbol_max() const;

private:
    std::size_t n_;
    std::size_t M_;
    double diag_ = 0.0;
    double lapc_ = 0.0;
    double ksum_ = 0.0;
    std::vector<std::complex<double>> khat_;
};

// 5-point (-Delta_h) u with exterior values taken from the background.
GridFunction neg_laplacian_h_2d(const GridFunction& u);

// Fractional part of the mixture applied to the background g(a.x) at the
// nodes of a 2-D grid (1-D operator on the profile, cubic interpolation).
std::vector<double> background_frac_L(const SpectralMeasure& m, double delta, const Background& bg,
                                      double X, std::size_t n);

GridFunction apply_L_2d(const SpectralMeasure& m, double delta, const GridFunction& u);

}  // namespace fraclayer
