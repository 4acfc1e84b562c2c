#pragma once

#include <utility>
#include <vector>

#include "fraclayer/core.hpp"

namespace fraclayer {

struct EnergyBreakdown {
    std::vector<std::pair<double, double>> per_atom_kinetic;  // (s, K^s)
    double lap_kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
    double R = 0.0;
    double phi_ref = 0.0;
};

// Index range [lo, hi] of the nodes of [-R, R], R snapped to the nearest node.
std::pair<std::size_t, std::size_t> ball_nodes(const GridFunction& u, double R);

double kinetic_s(const GridFunction& u, double s, double R);
double kinetic_lap(const GridFunction& u, double R);

EnergyBreakdown total_energy(const GridFunction& u, const SpectralMeasure& m, const Potential& p, double R);

// Bilinear form whose diagonal is twice the kinetic energy.
double scalar_product_s(const GridFunction& u, const GridFunction& v, double s, double R);
double scalar_product(const GridFunction& u, const GridFunction& v, const SpectralMeasure& m, double R);

// c_1(s) int_{|x|>R} dx int_{|y|<R} dy (u(x) - u(y)) v(x) / |x - y|^{1+2s}
double nonlocal_flux(const GridFunction& u, const GridFunction& v, double s, double R);

double verify_ibp(const GridFunction& u, const GridFunction& v, const SpectralMeasure& m, double R);

// c_n(s) int_{B_R} int_{complement} min(1, |x-y|) / |x-y|^{n+2s}
double claim41_integral(int n, double s, double R);

}  // namespace fraclayer
