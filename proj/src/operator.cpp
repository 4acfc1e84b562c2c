#include "fraclayer/operator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft.hpp"
#include "fraclayer/errors.hpp"
#include "fraclayer/operator2d.hpp"
#include "fraclayer/parallel.hpp"
#include "fraclayer/rules.hpp"

namespace fraclayer {

namespace {

constexpr std::size_t kPeriodicImages = 64;

void check_quadrature_s(double s) {
    if (!(s >= 0.05 && s <= 0.95)) throw DomainError("quadrature: s must lie in [0.05, 0.95]");
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

QuadratureOperator1D::QuadratureOperator1D(const SpectralMeasure& m, double delta, double h,
                                           std::size_t n, bool periodic, bool include_local)
    : n_(n), h_(h), periodic_(periodic) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("operator: delta must lie in [0, 1]");
    const std::size_t K = periodic ? kPeriodicImages * n : n;
    std::vector<double> W(K + 2, 0.0);
    double T = 0.0;
    if (delta < 1.0) {
        for (const Atom& a : m.atoms()) {
            check_quadrature_s(a.s);
            const ProductRule rule = power_rule(a.s, K, true);
            const double alpha = (1.0 - delta) * a.weight * c_ns(1, a.s) * std::pow(h, -2.0 * a.s);
            const auto& w = rule.weights();
            for (std::size_t j = 1; j < W.size(); ++j) W[j] += alpha * w[j];
            T += alpha * rule.tail();
        }
    }
    if (include_local) W[1] += (delta + (1.0 - delta) * m.lap_mass()) / (h * h);
    T_ = T;
    if (periodic) {
        W_.assign(n, 0.0);
        for (std::size_t j = 1; j < W.size(); ++j) W_[j % n] += W[j];
        W_[0] = 0.0;
    } else {
        W_ = std::move(W);
    }
}

double QuadratureOperator1D::apply_at(const double* u, double uL, double uR, std::size_t i) const {
    const long n = static_cast<long>(n_);
    const long li = static_cast<long>(i);
    const double ui = u[i];
    double acc = 0.0;
    const long K1 = static_cast<long>(W_.size()) - 1;
    for (long j = 1; j <= K1; ++j) {
        const long a = li + j;
        const long b = li - j;
        const double va = a < n ? u[a] : uR;
        const double vb = b >= 0 ? u[b] : uL;
        acc += W_[static_cast<std::size_t>(j)] * ((ui - va) + (ui - vb));
    }
    return acc + T_ * ((ui - uL) + (ui - uR));
}

void QuadratureOperator1D::apply(const double* u, double uL, double uR, double* out) const {
    if (periodic_) throw DomainError("operator: periodic operator applied with exterior values");
    const std::size_t K1 = W_.size() - 1;
    const std::size_t pad = K1 + 1;
    std::vector<double> e(n_ + 2 * pad);
    std::fill(e.begin(), e.begin() + static_cast<long>(pad), uL);
    std::copy(u, u + n_, e.begin() + static_cast<long>(pad));
    std::fill(e.begin() + static_cast<long>(pad + n_), e.end(), uR);
    const double* W = W_.data();
    const double T = T_;
    parallel_for(n_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double ui = u[i];
            const double* c = e.data() + pad + i;
            double acc = 0.0;
            for (std::size_t j = 1; j <= K1; ++j) acc += W[j] * ((ui - c[j]) + (ui - c[-static_cast<long>(j)]));
            out[i] = acc + T * ((ui - uL) + (ui - uR));
        }
    });
}

void QuadratureOperator1D::apply_periodic(const double* u, double* out) const {
    if (!periodic_) throw DomainError("operator: operator was not built for periodic grids");
    const std::size_t n = n_;
    const double mean = pairwise_sum(std::span<const double>(u, n)) / static_cast<double>(n);
    std::vector<double> e(3 * n);
    for (std::size_t k = 0; k < 3; ++k) std::copy(u, u + n, e.begin() + static_cast<long>(k * n));
    const double* W = W_.data();
    const double T = T_;
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double ui = u[i];
            const double* c = e.data() + n + i;
            double acc = 0.0;
            for (std::size_t j = 1; j < n; ++j) acc += W[j] * ((ui - c[j]) + (ui - c[-static_cast<long>(j)]));
            out[i] = acc + 2.0 * T * (ui - mean);
        }
    });
}

double QuadratureOperator1D::symbol_max() const {
    // symbol at the Nyquist frequency bounded by 4 sum |W_j| + 4 T
    double s = 0.0;
    for (double w : W_) s += std::abs(w);
    return 4.0 * s + 4.0 * T_;
}

double frac_laplacian_quadrature(const GridFunction& u, double s, std::size_t x_index) {
    check_quadrature_s(s);
    if (u.dim() != 1) throw DomainError("quadrature: single-node evaluation needs a 1-D function");
    if (u.tail() == Tail::periodic) throw DomainError("quadrature: periodic tails need the spectral backend");
    if (x_index >= u.n()) throw DomainError("quadrature: node index out of range");
    QuadratureOperator1D op(SpectralMeasure::single(s), 0.0, u.h(), u.n());
    return op.apply_at(u.values().data(), u.left_value(), u.right_value(), x_index);
}

GridFunction frac_laplacian_quadrature(const GridFunction& u, double s) {
    check_quadrature_s(s);
    OperatorSpec spec{SpectralMeasure::single(s), 0.0, Backend::quadrature};
    return apply_L(spec, u);
}

GridFunction frac_laplacian_spectral(const GridFunction& u, double s) {
    if (u.dim() != 1 || u.tail() != Tail::periodic)
        throw DomainError("spectral: needs a 1-D periodic function");
    if (!power_of_two(u.n())) throw DomainError("spectral: grid size must be a power of two");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("spectral: s must lie in (0, 1]");
    std::vector<std::complex<double>> c;
    detail::rfft(u.values(), c);
    const double dk = kPi / u.half_width();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= k == 0 ? 0.0 : std::pow(dk * static_cast<double>(k), 2.0 * s);
    GridFunction out(u.half_width(), u.n(), Tail::periodic);
    detail::irfft(c, u.n(), out.values());
    return out;
}

GridFunction neg_laplacian_h(const GridFunction& u) {
    if (u.dim() == 2) return neg_laplacian_h_2d(u);
    GridFunction out(u.half_width(), u.n(), u.tail());
    const std::size_t n = u.n();
    const double ih2 = 1.0 / (u.h() * u.h());
    const auto& v = u.values();
    for (std::size_t i = 0; i < n; ++i) {
        double l, r;
        if (u.tail() == Tail::periodic) {
            l = v[(i + n - 1) % n];
            r = v[(i + 1) % n];
        } else {
            l = i == 0 ? u.left_value() : v[i - 1];
            r = i + 1 == n ? u.right_value() : v[i + 1];
        }
        out[i] = (2.0 * v[i] - l - r) * ih2;
    }
    return out;
}

GridFunction apply_L(const OperatorSpec& spec, const GridFunction& u) {
    if (!(spec.delta >= 0.0 && spec.delta <= 1.0)) throw DomainError("operator: delta must lie in [0, 1]");
    if (u.dim() == 2) {
        if (spec.backend != Backend::quadrature) throw DomainError("operator: 2-D fields use the quadrature backend");
        return apply_L_2d(spec.measure, spec.delta, u);
    }
    if (spec.backend == Backend::spectral) {
        GridFunction lap = neg_laplacian_h(u);
        GridFunction out(u.half_width(), u.n(), Tail::periodic);
        const double cl = spec.delta + (1.0 - spec.delta) * spec.measure.lap_mass();
        for (std::size_t i = 0; i < u.n(); ++i) out[i] = cl * lap[i];
        for (const Atom& a : spec.measure.atoms()) {
            GridFunction f = frac_laplacian_spectral(u, a.s);
            for (std::size_t i = 0; i < u.n(); ++i) out[i] += (1.0 - spec.delta) * a.weight * f[i];
        }
        return out;
    }
    const bool periodic = u.tail() == Tail::periodic;
    QuadratureOperator1D op(spec.measure, spec.delta, u.h(), u.n(), periodic);
    GridFunction out(u.half_width(), u.n(), u.tail());
    if (periodic)
        op.apply_periodic(u.values().data(), out.values().data());
    else
        op.apply(u.values().data(), u.left_value(), u.right_value(), out.values().data());
    return out;
}

double backend_consistency(const GridFunction& u, double s) {
    GridFunction q = frac_laplacian_quadrature(u, s);
    GridFunction p = frac_laplacian_spectral(u, s);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < u.n(); ++i) {
        diff = std::max(diff, std::abs(q[i] - p[i]));
        scale = std::max(scale, std::abs(p[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace fraclayer
