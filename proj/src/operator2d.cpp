#include "fraclayer/operator2d.hpp"

#include <cmath>

#include "fft.hpp"
#include "fraclayer/errors.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/special.hpp"

namespace fraclayer {

CompactOperator2D::CompactOperator2D(const SpectralMeasure& m, double delta, double h, std::size_t n)
    : n_(n), M_(2 * n) {
    std::vector<double> kern(M_ * M_, 0.0);
    for (const Atom& a : m.atoms()) {
        if (!(a.s >= 0.05 && a.s <= 0.95)) throw DomainError("quadrature: s must lie in [0.05, 0.95]");
        const double alpha = (1.0 - delta) * a.weight * 0.5 * c_ns(2, a.s) * std::pow(h, -2.0 * a.s);
        diag_ += alpha * 2.0 * lattice_zeta2(2.0 + 2.0 * a.s);
        lapc_ += alpha * 0.5 * lattice_zeta2(2.0 * a.s);
        const double e = -1.0 - a.s;  // |k|^{-2-2s} = (|k|^2)^{-1-s}
        const long ln = static_cast<long>(n);
        for (long k2 = -(ln - 1); k2 <= ln - 1; ++k2) {
            for (long k1 = -(ln - 1); k1 <= ln - 1; ++k1) {
                if (k1 == 0 && k2 == 0) continue;
                const double r2 = static_cast<double>(k1 * k1 + k2 * k2);
                const std::size_t i1 = static_cast<std::size_t>((k1 + static_cast<long>(M_)) % static_cast<long>(M_));
                const std::size_t i2 = static_cast<std::size_t>((k2 + static_cast<long>(M_)) % static_cast<long>(M_));
                kern[i2 * M_ + i1] += alpha * 2.0 * std::pow(r2, e);
            }
        }
    }
    for (double k : kern) ksum_ += k;
    detail::rfft2(kern, M_, M_, khat_);
}

void CompactOperator2D::apply(const std::vector<double>& v, std::vector<double>& out) const {
    const std::size_t n = n_, M = M_;
    std::vector<double> pad(M * M, 0.0);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) pad[i2 * M + i1] = v[i2 * n + i1];
    std::vector<std::complex<double>> c;
    detail::rfft2(pad, M, M, c);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= khat_[k];
    std::vector<double> conv;
    detail::irfft2(c, M, M, conv);
    out.assign(n * n, 0.0);
    auto at = [&](long i1, long i2) -> double {
        if (i1 < 0 || i2 < 0 || i1 >= static_cast<long>(n) || i2 >= static_cast<long>(n)) return 0.0;
        return v[static_cast<std::size_t>(i2) * n + static_cast<std::size_t>(i1)];
    };
    for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const long a = static_cast<long>(i1), b = static_cast<long>(i2);
            const double vi = v[i2 * n + i1];
            const double lap = at(a + 1, b) + at(a - 1, b) + at(a, b + 1) + at(a, b - 1) - 4.0 * vi;
            out[i2 * n + i1] = diag_ * vi - conv[i2 * M + i1] + lapc_ * lap;
        }
    }
}

double CompactOperator2D::symbol_max() const { return diag_ + ksum_ + 8.0 * std::abs(lapc_); }

GridFunction neg_laplacian_h_2d(const GridFunction& u) {
    const std::size_t n = u.n();
    const double h = u.h();
    GridFunction out = GridFunction::make_2d(u.half_width(), n, u.tail(), u.background());
    auto val = [&](long i1, long i2) -> double {
        if (i1 >= 0 && i2 >= 0 && i1 < static_cast<long>(n) && i2 < static_cast<long>(n))
            return u.at(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2));
        return u.eval2(-u.half_width() + h * static_cast<double>(i1), -u.half_width() + h * static_cast<double>(i2));
    };
    const double ih2 = 1.0 / (h * h);
    for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const long a = static_cast<long>(i1), b = static_cast<long>(i2);
            out.at(i1, i2) = (4.0 * u.at(i1, i2) - val(a + 1, b) - val(a - 1, b) - val(a, b + 1) - val(a, b - 1)) * ih2;
        }
    }
    return out;
}

std::vector<double> background_frac_L(const SpectralMeasure& m, double delta, const Background& bg,
                                      double X, std::size_t n) {
    const GridFunction& p = *bg.profile;
    if (p.dim() != 1 || p.tail() == Tail::periodic)
        throw DomainError("background: profile must be a non-periodic 1-D function");
    QuadratureOperator1D op(m, delta, p.h(), p.n(), false, false);
    std::vector<double> lp(p.n());
    op.apply(p.values().data(), p.left_value(), p.right_value(), lp.data());
    GridFunction Lg(p.half_width(), std::move(lp), Tail::constant);

    const double h = 2.0 * X / static_cast<double>(n - 1);
    std::vector<double> out(n * n);
    for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double xi = bg.direction[0] * (-X + h * static_cast<double>(i1)) +
                              bg.direction[1] * (-X + h * static_cast<double>(i2));
            if (std::abs(xi) > p.half_width() - 2.0 * p.h())
                throw DomainError("background: profile grid too short for the 2-D box");
            out[i2 * n + i1] = Lg.eval(xi);
        }
    }
    return out;
}

GridFunction apply_L_2d(const SpectralMeasure& m, double delta, const GridFunction& u) {
    const std::size_t n = u.n();
    const double X = u.half_width();
    std::vector<double> v = u.values();
    std::vector<double> lg(n * n, 0.0);
    if (u.background()) {
        const Background& bg = *u.background();
        lg = background_frac_L(m, delta, bg, X, n);
        for (std::size_t i2 = 0; i2 < n; ++i2)
            for (std::size_t i1 = 0; i1 < n; ++i1)
                v[i2 * n + i1] -= bg.profile->eval(bg.direction[0] * u.x(i1) + bg.direction[1] * u.x(i2));
    }
    CompactOperator2D A(m, delta, u.h(), n);
    std::vector<double> av;
    A.apply(v, av);
    GridFunction lap = neg_laplacian_h_2d(u);
    const double cl = delta + (1.0 - delta) * m.lap_mass();
    GridFunction out = GridFunction::make_2d(X, n, u.tail(), u.background());
    for (std::size_t k = 0; k < n * n; ++k) out.values()[k] = lg[k] + av[k] + cl * lap.values()[k];
    return out;
}

}  // namespace fraclayer
