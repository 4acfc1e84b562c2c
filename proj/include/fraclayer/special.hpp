#pragma once

namespace fraclayer {

double gamma_fn(double x);
double lgamma_fn(double x);

// Dirichlet beta function sum_{k>=0} (-1)^k (2k+1)^{-s}, s > 0.
double dirichlet_beta(double s);

// Epstein zeta of the square lattice, sum over nonzero k in Z^2 of |k|^{-sigma},
// analytically continued; equals 4 zeta(sigma/2) beta(sigma/2).
double lattice_zeta2(double sigma);

}  // namespace fraclayer
