#include "fraclayer/energy.hpp"

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclayer/errors.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/parallel.hpp"
#include "fraclayer/rules.hpp"

namespace fraclayer {

namespace {

void check_energy_input(const GridFunction& u, double s) {
    if (u.dim() != 1) throw DomainError("energy: 1-D functions only");
    if (u.tail() == Tail::periodic) throw DomainError("energy: periodic functions have no ball energy");
    if (!(s >= 0.05 && s <= 0.95)) throw DomainError("energy: s must lie in [0.05, 0.95]");
}

// Exterior-aware sample accessor.
struct Sampler {
    const std::vector<double>& v;
    double left, right;
    long n;
    double operator()(long i) const {
        if (i < 0) return left;
        if (i >= n) return right;
        return v[static_cast<std::size_t>(i)];
    }
};

Sampler sampler(const GridFunction& u) {
    return Sampler{u.values(), u.left_value(), u.right_value(), static_cast<long>(u.n())};
}

double trapezoid_sum(std::vector<double>& f) {
    if (f.size() >= 2) {
        f.front() *= 0.5;
        f.back() *= 0.5;
    }
    return pairwise_sum(f);
}

// G(rho) = int_rho^inf min(1, r) r^{-1-2s} dr
double claim_radial(double rho, double s) {
    if (rho >= 1.0) return std::pow(rho, -2.0 * s) / (2.0 * s);
    const double eps = 1.0 - 2.0 * s;
    const double lr = std::log(rho);
    const double near = eps == 0.0 ? -lr : -std::expm1(eps * lr) / eps;
    return near + 1.0 / (2.0 * s);
}

}  // namespace

std::pair<std::size_t, std::size_t> ball_nodes(const GridFunction& u, double R) {
    if (!(R > 0.0)) throw DomainError("energy: R must be positive");
    if (R > u.half_width() - 2.0) throw DomainError("energy: R exceeds X - 2");
    const double h = u.h();
    const double plo = (u.half_width() - R) / h;
    const double phi_ = (u.half_width() + R) / h;
    // snapped to the nearest nodes; symmetric because the grid is
    const double rlo = std::round(plo), rhi = std::round(phi_);
    if (rhi <= rlo) throw DomainError("energy: ball smaller than one cell");
    return {static_cast<std::size_t>(rlo), static_cast<std::size_t>(rhi)};
}

double scalar_product_s(const GridFunction& u, const GridFunction& v, double s, double R) {
    check_energy_input(u, s);
    if (!u.same_grid(v)) throw DomainError("energy: functions must share a grid");
    const auto [lo, hi] = ball_nodes(u, R);
    const std::size_t n = u.n();
    const ProductRule rule = power_rule(s, n, false);
    const Sampler U = sampler(u), V = sampler(v);
    const double tail = rule.tail();
    std::vector<double> f(hi - lo + 1);
    parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const long i = static_cast<long>(lo + k);
            const double ui = U(i), vi = V(i);
            auto qp = [&](std::size_t t) {
                const long j = i + static_cast<long>(t);
                return (ui - U(j)) * (vi - V(j));
            };
            auto qm = [&](std::size_t t) {
                const long j = i - static_cast<long>(t);
                return (ui - U(j)) * (vi - V(j));
            };
            const double qp_inf = (ui - U.right) * (vi - V.right);
            const double qm_inf = (ui - U.left) * (vi - V.left);
            const double whole = rule.integrate_from(0, qp) + rule.integrate_from(0, qm) + tail * (qp_inf + qm_inf);
            const double outside = rule.integrate_from(hi - static_cast<std::size_t>(i), qp) +
                                   rule.integrate_from(static_cast<std::size_t>(i) - lo, qm) +
                                   tail * (qp_inf + qm_inf);
            f[k] = whole + outside;
        }
    });
    const double h = u.h();
    return 0.5 * c_ns(1, s) * std::pow(h, -2.0 * s) * h * trapezoid_sum(f);
}

double kinetic_s(const GridFunction& u, double s, double R) { return 0.5 * scalar_product_s(u, u, s, R); }

namespace {
double dirichlet_product(const GridFunction& u, const GridFunction& v, double R) {
    const auto [lo, hi] = ball_nodes(u, R);
    std::vector<double> f;
    f.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) f.push_back((u[i + 1] - u[i]) * (v[i + 1] - v[i]));
    return pairwise_sum(f) / u.h();
}
}  // namespace

double kinetic_lap(const GridFunction& u, double R) {
    if (u.dim() != 1 || u.tail() == Tail::periodic) throw DomainError("energy: 1-D non-periodic functions only");
    return 0.5 * dirichlet_product(u, u, R);
}

double scalar_product(const GridFunction& u, const GridFunction& v, const SpectralMeasure& m, double R) {
    double r = 0.0;
    for (const Atom& a : m.atoms()) r += a.weight * scalar_product_s(u, v, a.s, R);
    if (m.lap_mass() > 0.0) r += m.lap_mass() * dirichlet_product(u, v, R);
    return r;
}

EnergyBreakdown total_energy(const GridFunction& u, const SpectralMeasure& m, const Potential& p, double R) {
    EnergyBreakdown e;
    const auto [lo, hi] = ball_nodes(u, R);
    e.R = u.x(hi);
    for (const Atom& a : m.atoms()) e.per_atom_kinetic.emplace_back(a.s, kinetic_s(u, a.s, R));
    if (m.lap_mass() > 0.0) e.lap_kinetic = kinetic_lap(u, R);
    std::vector<double> w;
    for (std::size_t i = lo; i <= hi; ++i) w.push_back(p.W(u[i]));
    e.potential = u.h() * trapezoid_sum(w);
    double total = e.potential + m.lap_mass() * e.lap_kinetic;
    for (std::size_t k = 0; k < m.atoms().size(); ++k) total += m.atoms()[k].weight * e.per_atom_kinetic[k].second;
    e.total = total;
    e.phi_ref = R >= 2.0 ? phi(1, m.s_star(), R) : 0.0;
    return e;
}

double nonlocal_flux(const GridFunction& u, const GridFunction& v, double s, double R) {
    check_energy_input(u, s);
    if (!u.same_grid(v)) throw DomainError("energy: functions must share a grid");
    const auto [lo, hi] = ball_nodes(u, R);
    const Sampler U = sampler(u), V = sampler(v);
    const double h = u.h();
    const long B = static_cast<long>(hi - lo);

    // side = +1: x = R + a, y = R - b; side = -1 mirrored
    auto side_integral = [&](int side) {
        const long edge = side > 0 ? static_cast<long>(hi) : static_cast<long>(lo);
        const long A = side > 0 ? static_cast<long>(u.n()) - 1 - edge : edge;
        const double ext_u = side > 0 ? U.right : U.left;
        const double ext_v = side > 0 ? V.right : V.left;
        auto F = [&](long a, long b) {
            const long ix = edge + side * a;
            const long iy = edge - side * b;
            return (U(ix) - U(iy)) * V(ix);
        };
        const long Kmax = A + B;
        std::vector<double> H(static_cast<std::size_t>(Kmax) + 2, 0.0);
        parallel_for(static_cast<std::size_t>(Kmax) + 1, [&](std::size_t b0, std::size_t e0) {
            for (std::size_t kk = b0; kk < e0; ++kk) {
                const long k = static_cast<long>(kk);
                const long a0 = std::max(0L, k - B), a1 = std::min(k, A);
                if (a1 <= a0) continue;
                double acc = 0.5 * (F(a0, k - a0) + F(a1, k - a1));
                for (long a = a0 + 1; a < a1; ++a) acc += F(a, k - a);
                H[kk] = acc;
            }
        });
        const ProductRule rule = power_rule(s, static_cast<std::size_t>(Kmax) + 1, false);
        auto hq = [&](std::size_t t) { return t < H.size() ? H[t] : 0.0; };
        const double grid_part = std::pow(h, 1.0 - 2.0 * s) * rule.integrate_from(0, hq);
        std::vector<double> far(static_cast<std::size_t>(B) + 1);
        for (long b = 0; b <= B; ++b) {
            const double yv = U(edge - side * b);
            far[static_cast<std::size_t>(b)] =
                (ext_u - yv) * std::pow(h * static_cast<double>(A + b), -2.0 * s) / (2.0 * s);
        }
        return grid_part + ext_v * h * trapezoid_sum(far);
    };
    return c_ns(1, s) * (side_integral(1) + side_integral(-1));
}

double verify_ibp(const GridFunction& u, const GridFunction& v, const SpectralMeasure& m, double R) {
    const double lhs = scalar_product(u, v, m, R);
    const GridFunction Lu = apply_L(OperatorSpec{m, 0.0, Backend::quadrature}, u);
    const auto [lo, hi] = ball_nodes(u, R);
    std::vector<double> f;
    for (std::size_t i = lo; i <= hi; ++i) f.push_back(Lu[i] * v[i]);
    double rhs = u.h() * trapezoid_sum(f);
    for (const Atom& a : m.atoms()) rhs += a.weight * nonlocal_flux(u, v, a.s, R);
    if (m.lap_mass() > 0.0) {
        const double h = u.h();
        const double du_r = (u[hi + 1] - u[hi - 1]) / (2.0 * h);
        const double du_l = (u[lo + 1] - u[lo - 1]) / (2.0 * h);
        rhs += m.lap_mass() * (du_r * v[hi] - du_l * v[lo]);
    }
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

double claim41_integral(int n, double s, double R) {
    if (!(R >= 2.0)) throw DomainError("claim41: R must be >= 2");
    if (n != 1 && n != 2) throw DomainError("claim41: n must be 1 or 2");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("claim41: s must lie in (0, 1)");
    boost::math::quadrature::tanh_sinh<double> ts;
    auto G = [s](double rho) { return claim_radial(rho, s); };
    if (n == 1) {
        // rho = R - x is the distance to the nearer end of the interval
        auto inner = [&](double rho) { return G(rho) + G(2.0 * R - rho); };
        const double I = 2.0 * (ts.integrate(inner, 0.0, 1.0) + ts.integrate(inner, 1.0, R));
        return c_ns(1, s) * I;
    }
    auto ray = [&](double r, double th) {
        const double sn = std::sin(th), cs = std::cos(th);
        return -r * cs + std::sqrt(std::max(0.0, R * R - r * r * sn * sn));
    };
    auto angular = [&](double r) {
        return 2.0 * ts.integrate([&](double th) { return G(std::max(ray(r, th), 1e-300)); }, 0.0, kPi);
    };
    const double I = ts.integrate([&](double r) { return r * angular(r); }, 0.0, R);
    return c_ns(2, s) * I;
}

}  // namespace fraclayer
