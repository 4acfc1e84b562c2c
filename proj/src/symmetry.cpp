#include "fraclayer/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>

#include "fft.hpp"
#include "fraclayer/energy.hpp"
#include "fraclayer/errors.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/operator2d.hpp"
#include "fraclayer/parallel.hpp"

namespace fraclayer {

namespace {

constexpr double kPhiFloor = 1e-8;
constexpr double kSmallLambda = 4.0;   // mass correction below kSmallLambda * h
constexpr std::size_t kPartialTerms = 20;

std::array<double, 2> unit(std::array<double, 2> a) {
    const double r = std::hypot(a[0], a[1]);
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("symmetry: direction must be a nonzero vector");
    return {a[0] / r, a[1] / r};
}

// Derivative of a 1-D function on its own grid, zero outside.
GridFunction derivative_1d(const GridFunction& g) {
    const std::size_t n = g.n();
    const double h = g.h();
    const auto& v = g.values();
    std::vector<double> d(n, 0.0);
    auto val = [&](long i) {
        if (i < 0) return g.left_value();
        if (i >= static_cast<long>(n)) return g.right_value();
        return v[static_cast<std::size_t>(i)];
    };
    for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(i);
        d[i] = (val(k - 2) - 8.0 * val(k - 1) + 8.0 * val(k + 1) - val(k + 2)) / (12.0 * h);
    }
    return GridFunction(g.half_width(), std::move(d), Tail::zero);
}

// Gradient of an n x n array; 4th order inside, lower order near the edges.
void grad_2d(const std::vector<double>& f, std::size_t n, double h, double* g1, double* g2) {
    auto d = [&](std::size_t i, auto get) {
        if (i >= 2 && i + 2 < n) return (get(i - 2) - 8.0 * get(i - 1) + 8.0 * get(i + 1) - get(i + 2)) / (12.0 * h);
        if (i >= 1 && i + 1 < n) return (get(i + 1) - get(i - 1)) / (2.0 * h);
        if (i == 0) return (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h);
        return (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) / (2.0 * h);
    };
    for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            g1[i2 * n + i1] = d(i1, [&](std::size_t k) { return f[i2 * n + k]; });
            g2[i2 * n + i1] = d(i2, [&](std::size_t k) { return f[k * n + i1]; });
        }
    }
}

double xi_of(const std::array<double, 2>& a, double x1, double x2) { return a[0] * x1 + a[1] * x2; }

struct Split {
    std::shared_ptr<const Background> bg;
    std::vector<double> v;   // u minus background on the box
};

Split split(const GridFunction& u) {
    Split s{u.background(), u.values()};
    if (s.bg) {
        const std::size_t n = u.n();
        for (std::size_t i2 = 0; i2 < n; ++i2)
            for (std::size_t i1 = 0; i1 < n; ++i1)
                s.v[i2 * n + i1] -= s.bg->profile->eval(xi_of(s.bg->direction, u.x(i1), u.x(i2)));
    }
    return s;
}

// P_s(., lambda) * v for v supported in the box, trapezoid with unit mass near lambda = 0.
class CompactPoisson2D {
public:
    CompactPoisson2D(const std::vector<double>& v, std::size_t n, double h) : n_(n), M_(2 * n), h_(h) {
        std::vector<double> pad(M_ * M_, 0.0);
        for (std::size_t i2 = 0; i2 < n; ++i2)
            for (std::size_t i1 = 0; i1 < n; ++i1) pad[i2 * M_ + i1] = v[i2 * n + i1];
        detail::rfft2(pad, M_, M_, vhat_);
    }

    std::vector<double> row(double s, double lambda) const {
        const std::size_t M = M_;
        const long ln = static_cast<long>(n_);
        std::vector<double> kern(M * M, 0.0);
        double total = 0.0;
        for (long k2 = -(ln - 1); k2 <= ln - 1; ++k2) {
            for (long k1 = -(ln - 1); k1 <= ln - 1; ++k1) {
                const double r = h_ * std::hypot(static_cast<double>(k1), static_cast<double>(k2));
                const double w = h_ * h_ * poisson_kernel(2, s, r, lambda);
                const std::size_t i1 = static_cast<std::size_t>((k1 + static_cast<long>(M)) % static_cast<long>(M));
                const std::size_t i2 = static_cast<std::size_t>((k2 + static_cast<long>(M)) % static_cast<long>(M));
                kern[i2 * M + i1] = w;
                total += w;
            }
        }
        if (lambda < kSmallLambda * h_) {
            const double r_eq = 2.0 * static_cast<double>(n_ - 1) * h_ / std::sqrt(kPi);
            const double outside = std::pow(lambda * lambda / (r_eq * r_eq + lambda * lambda), s);
            kern[0] += 1.0 - total - outside;
        }
        std::vector<std::complex<double>> kh;
        detail::rfft2(kern, M, M, kh);
        for (std::size_t k = 0; k < kh.size(); ++k) kh[k] *= vhat_[k];
        std::vector<double> conv;
        detail::irfft2(kh, M, M, conv);
        std::vector<double> out(n_ * n_);
        for (std::size_t i2 = 0; i2 < n_; ++i2)
            for (std::size_t i1 = 0; i1 < n_; ++i1) out[i2 * n_ + i1] = conv[i2 * M + i1];
        return out;
    }

private:
    std::size_t n_, M_;
    double h_;
    std::vector<std::complex<double>> vhat_;
};

double sup_grad(const GridFunction& u) {
    const std::size_t n = u.n();
    std::vector<double> g1(n * n), g2(n * n);
    grad_2d(u.values(), n, u.h(), g1.data(), g2.data());
    double m = 0.0;
    for (std::size_t k = 0; k < n * n; ++k) m = std::max(m, std::hypot(g1[k], g2[k]));
    return m;
}

// Node indices of the closed disk of radius R, each with a full stencil inside the box.
std::vector<std::size_t> disk_nodes(const GridFunction& u, double R, std::size_t margin) {
    const std::size_t n = u.n();
    std::vector<std::size_t> out;
    for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            if (std::hypot(u.x(i1), u.x(i2)) > R + 1e-12) continue;
            if (i1 < margin || i2 < margin || i1 + margin >= n || i2 + margin >= n)
                throw DomainError("symmetry: cylinder radius exceeds the box");
            out.push_back(i2 * n + i1);
        }
    }
    return out;
}

struct Parts {
    double x;   // |grad_x f|^2
    double l;   // (lambda^{1-2s} d_lambda f)^2
};

// sum over disk nodes of int_0^R lambda^{1-2s} (x + lambda^{4s-2} l) d lambda, times h^2
template <class F>
double cylinder_integral(const LiouvilleData& d, std::size_t a, double R, F parts) {
    const std::size_t M = d.grid.rows();
    const auto& lam = d.grid.lambda;
    const double s = d.s[a];
    const double eta = std::log(d.grid.rho);
    std::size_t J = 2;
    while (J + 1 < M && lam[J + 1] <= R) ++J;
    if (J + 2 >= M) throw DomainError("symmetry: lambda grid does not reach the cylinder top");
    const std::vector<std::size_t> nodes = disk_nodes(d.trace, R, 2);
    const double t = std::log(R / lam[J]) / eta;
    std::vector<double> col(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const std::size_t idx = nodes[k];
            auto dens = [&](std::size_t j) -> double {
                const std::optional<Parts> p = parts(j, idx);
                if (!p) return 0.0;
                return std::pow(lam[j], 2.0 - 2.0 * s) * p->x + std::pow(lam[j], 2.0 * s) * p->l;
            };
            double acc = 0.0;
            for (std::size_t j = 2; j <= J; ++j) acc += (j == 2 || j == J ? 0.5 : 1.0) * dens(j);
            acc *= eta;
            const double dJ = dens(J), dJ1 = dens(J + 1);
            acc += 0.5 * (dJ + (dJ + t * (dJ1 - dJ))) * t * eta;
            if (const std::optional<Parts> p0 = parts(2, idx)) {
                acc += p0->x * std::pow(lam[2], 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
                acc += p0->l * std::pow(lam[2], 2.0 * s) / (2.0 * s);
            }
            col[k] = acc;
        }
    });
    const double h = d.trace.h();
    return h * h * pairwise_sum(col);
}

template <class F>
double disk_integral(const LiouvilleData& d, double R, F density) {
    const std::vector<std::size_t> nodes = disk_nodes(d.trace, R, 2);
    std::vector<double> col(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) col[k] = density(nodes[k]);
    const double h = d.trace.h();
    return h * h * pairwise_sum(col);
}

}  // namespace

double growth_F(GrowthKind k, double R) {
    if (!(R > 1.0)) throw DomainError("growth: R must exceed 1");
    switch (k) {
        case GrowthKind::log: return std::log(R);
        case GrowthKind::r2logr: return R * R * std::log(R);
        case GrowthKind::constant: return 1.0;
    }
    return 1.0;
}

std::string growth_name(GrowthKind k) {
    switch (k) {
        case GrowthKind::log: return "log";
        case GrowthKind::r2logr: return "r2logr";
        case GrowthKind::constant: return "constant";
    }
    return "log";
}

GrowthKind growth_from_name(const std::string& name) {
    if (name == "log") return GrowthKind::log;
    if (name == "r2logr") return GrowthKind::r2logr;
    if (name == "constant") return GrowthKind::constant;
    throw ConfigError("unknown growth function '" + name + "'");
}

LiouvilleData liouville_data(const GridFunction& u, const SpectralMeasure& m, const LambdaGrid& grid) {
    if (u.dim() != 2) throw DomainError("symmetry: 2-D trace required");
    if (grid.rows() < 6) throw DomainError("symmetry: lambda grid too short");
    const std::size_t n = u.n();
    const std::size_t N = n * n;
    const std::size_t rows = grid.rows();
    const double h = u.h();
    LiouvilleData d;
    d.trace = u;
    d.grid = grid;
    d.lap_mass = m.lap_mass();
    d.eps_phi = kPhiFloor * sup_grad(u);

    const Split sp = split(u);
    std::optional<GridFunction> dprof;
    if (sp.bg) dprof = derivative_1d(*sp.bg->profile);
    const CompactPoisson2D conv(sp.v, n, h);

    for (const Atom& at : m.atoms()) {
        d.s.push_back(at.s);
        d.weight.push_back(at.weight);
        std::vector<double> sheet(rows * N), g1(rows * N), g2(rows * N);
        for (std::size_t j = 0; j < rows; ++j) {
            std::vector<double> w = j == 0 ? sp.v : conv.row(at.s, grid.lambda[j]);
            double* G1 = g1.data() + j * N;
            double* G2 = g2.data() + j * N;
            grad_2d(w, n, h, G1, G2);
            if (sp.bg) {
                const auto& a = sp.bg->direction;
                GridFunction S = *sp.bg->profile;
                GridFunction dS = *dprof;
                if (j > 0) {
                    S = GridFunction(S.half_width(), extend_row(*sp.bg->profile, at.s, grid.lambda[j]), Tail::constant);
                    dS = derivative_1d(S);
                }
                for (std::size_t i2 = 0; i2 < n; ++i2) {
                    for (std::size_t i1 = 0; i1 < n; ++i1) {
                        const double xi = xi_of(a, u.x(i1), u.x(i2));
                        const std::size_t k = i2 * n + i1;
                        w[k] += S.eval(xi);
                        const double ds = dS.eval(xi);
                        G1[k] += a[0] * ds;
                        G2[k] += a[1] * ds;
                    }
                }
            }
            std::copy(w.begin(), w.end(), sheet.begin() + static_cast<long>(j * N));
        }
        std::vector<double> sigma(rows * N, 0.0);
        std::vector<unsigned char> mask(rows * N, 0);
        for (std::size_t j = 0; j < rows; ++j) {
            for (std::size_t i2 = 0; i2 < n; ++i2) {
                for (std::size_t i1 = 0; i1 < n; ++i1) {
                    const std::size_t k = j * N + i2 * n + i1;
                    const bool interior = i1 > 0 && i2 > 0 && i1 + 1 < n && i2 + 1 < n;
                    if (interior && g2[k] < -d.eps_phi)
                        throw ContractViolation("symmetry: phi = d_2 u is negative at an interior node");
                    if (g2[k] >= d.eps_phi) {
                        mask[k] = 1;
                        sigma[k] = g1[k] / g2[k];
                    }
                }
            }
        }
        d.sheets.push_back(std::move(sheet));
        d.grad1.push_back(std::move(g1));
        d.phi_sheets.push_back(std::move(g2));
        d.sigma_sheets.push_back(std::move(sigma));
        d.mask.push_back(std::move(mask));
    }
    return d;
}

namespace {

// Local gradient parts of sigma at (j, idx); nullopt if a stencil node is masked.
std::optional<Parts> sigma_parts(const LiouvilleData& d, std::size_t a, std::size_t j, std::size_t idx) {
    const std::size_t n = d.trace.n();
    const std::size_t N = n * n;
    const auto& sg = d.sigma_sheets[a];
    const auto& mk = d.mask[a];
    const std::size_t k = j * N + idx;
    const std::size_t nb[] = {k - 1, k + 1, k - n, k + n, k};
    for (std::size_t q : nb)
        if (!mk[q]) return std::nullopt;
    const double h = d.trace.h();
    const double phi = d.phi_sheets[a][k];
    const double sx = (sg[k + 1] - sg[k - 1]) / (2.0 * h);
    const double sy = (sg[k + n] - sg[k - n]) / (2.0 * h);
    Parts p{phi * phi * (sx * sx + sy * sy), 0.0};
    if (j >= 1 && j + 1 < d.grid.rows()) {
        if (!mk[k - N] || !mk[k + N]) return std::nullopt;
        const double lam = d.grid.lambda[j];
        const double eta = std::log(d.grid.rho);
        double dl;
        if (j == 1) {
            dl = (sg[k + N] - sg[k]) / (lam * eta);
        } else {
            dl = (sg[k + N] - sg[k - N]) / (2.0 * eta * lam);
        }
        const double q = std::pow(lam, 1.0 - 2.0 * d.s[a]) * phi * dl;
        p.l = q * q;
    }
    return p;
}

std::optional<Parts> field_parts(const LiouvilleData& d, std::size_t a, std::size_t j, std::size_t idx) {
    const std::size_t N = d.trace.n() * d.trace.n();
    const std::size_t k = j * N + idx;
    const double gx = d.grad1[a][k], gy = d.phi_sheets[a][k];
    Parts p{gx * gx + gy * gy, 0.0};
    if (j >= 2 && j + 1 < d.grid.rows()) {
        const double lam = d.grid.lambda[j];
        const double eta = std::log(d.grid.rho);
        const double dl = (d.sheets[a][k + N] - d.sheets[a][k - N]) / (2.0 * eta * lam);
        const double q = std::pow(lam, 1.0 - 2.0 * d.s[a]) * dl;
        p.l = q * q;
    }
    return p;
}

double dcal(double s) { return calibrate_d(s).d; }

void check_measure(const LiouvilleData& d, const SpectralMeasure& m) {
    if (m.atoms().size() != d.atoms()) throw DomainError("symmetry: measure does not match the data");
}

}  // namespace

double liouville_D(const LiouvilleData& data, const SpectralMeasure& m, double R) {
    check_measure(data, m);
    double total = 0.0;
    for (std::size_t a = 0; a < data.atoms(); ++a) {
        const double w = m.atoms()[a].weight * dcal(data.s[a]);
        total += w * cylinder_integral(data, a, R, [&](std::size_t j, std::size_t idx) {
            return sigma_parts(data, a, j, idx);
        });
    }
    if (data.lap_mass > 0.0 && data.atoms() > 0) {
        total += data.lap_mass * disk_integral(data, R, [&](std::size_t idx) {
            const std::optional<Parts> p = sigma_parts(data, 0, 0, idx);
            return p ? p->x : 0.0;
        });
    }
    return total;
}

double liouville_norm(const LiouvilleData& data, const SpectralMeasure& m, double R) {
    check_measure(data, m);
    double total = 0.0;
    for (std::size_t a = 0; a < data.atoms(); ++a) {
        const double w = m.atoms()[a].weight * dcal(data.s[a]);
        total += w * cylinder_integral(data, a, R, [&](std::size_t j, std::size_t idx) {
            return field_parts(data, a, j, idx);
        });
    }
    if (data.lap_mass > 0.0 && data.atoms() > 0) {
        total += data.lap_mass * disk_integral(data, R, [&](std::size_t idx) {
            return field_parts(data, 0, 0, idx)->x;
        });
    }
    return total;
}

GrowthReport growth_check(const LiouvilleData& data, const SpectralMeasure& m, const std::vector<double>& R_list) {
    check_measure(data, m);
    GrowthReport rep;
    for (double R : R_list) {
        double mass = 0.0;
        for (std::size_t a = 0; a < data.atoms(); ++a) {
            const double w = m.atoms()[a].weight * dcal(data.s[a]);
            mass += w * cylinder_integral(data, a, R, [&](std::size_t j, std::size_t idx) -> std::optional<Parts> {
                const double g = data.grad1[a][j * data.trace.n() * data.trace.n() + idx];
                return Parts{g * g, 0.0};
            });
        }
        if (data.lap_mass > 0.0 && data.atoms() > 0) {
            mass += data.lap_mass * disk_integral(data, R, [&](std::size_t idx) {
                const double g = data.grad1[0][idx];
                return g * g;
            });
        }
        const double bound = R * R * growth_F(data.F_kind, R);
        rep.rows.push_back({R, mass, bound, mass / bound});
    }
    double sum = 0.0;
    rep.diverges = true;
    for (std::size_t j = 1; j <= kPartialTerms; ++j) {
        const double term = 1.0 / growth_F(data.F_kind, std::ldexp(1.0, static_cast<int>(j + 1)));
        sum += term;
        rep.partial_sums.push_back(sum);
        if (term <= 1e-3) rep.diverges = false;
    }
    return rep;
}

double neumann_combination(const LiouvilleData& data, double R) {
    const std::size_t n = data.trace.n();
    const std::size_t N = n * n;
    const double h = data.trace.h();
    const std::vector<std::size_t> nodes = disk_nodes(data.trace, R, 2);
    std::vector<double> comb(nodes.size(), 0.0), scale(nodes.size(), 0.0);
    auto flux = [&](const std::vector<double>& g, double s, std::size_t idx) {
        auto q = [&](std::size_t j) {
            return 2.0 * s * (g[idx] - g[j * N + idx]) * std::pow(data.grid.lambda[j], -2.0 * s);
        };
        const double r = std::pow(data.grid.rho, 2.0 - 2.0 * s);
        return (r * q(1) - q(2)) / (r - 1.0);
    };
    for (std::size_t a = 0; a < data.atoms(); ++a) {
        const double w = data.weight[a] * dcal(data.s[a]);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const std::size_t idx = nodes[k];
            const double F1 = flux(data.grad1[a], data.s[a], idx);
            const double F2 = flux(data.phi_sheets[a], data.s[a], idx);
            const double u1 = data.grad1[a][idx], u2 = data.phi_sheets[a][idx];
            comb[k] += w * (u2 * F1 - u1 * F2);
            scale[k] += w * (std::abs(u2 * F1) + std::abs(u1 * F2));
        }
    }
    if (data.lap_mass > 0.0 && data.atoms() > 0) {
        auto lap = [&](const std::vector<double>& g, std::size_t idx) {
            return (4.0 * g[idx] - g[idx - 1] - g[idx + 1] - g[idx - n] - g[idx + n]) / (h * h);
        };
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const std::size_t idx = nodes[k];
            const double F1 = lap(data.grad1[0], idx), F2 = lap(data.phi_sheets[0], idx);
            const double u1 = data.grad1[0][idx], u2 = data.phi_sheets[0][idx];
            comb[k] += data.lap_mass * (u2 * F1 - u1 * F2);
            scale[k] += data.lap_mass * (std::abs(u2 * F1) + std::abs(u1 * F2));
        }
    }
    double c = 0.0, sc = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        c = std::max(c, std::abs(comb[k]));
        sc = std::max(sc, scale[k]);
    }
    return sc > 0.0 ? c / sc : 0.0;
}

SymmetryMeasure symmetry_measure_2d(const GridFunction& u) {
    if (u.dim() != 2) throw DomainError("symmetry: 2-D field required");
    const std::size_t n = u.n();
    if (n < 8) throw DomainError("symmetry: grid too small");
    std::vector<double> g1(n * n), g2(n * n);
    grad_2d(u.values(), n, u.h(), g1.data(), g2.data());
    double sup = 0.0;
    for (std::size_t i2 = 2; i2 + 2 < n; ++i2)
        for (std::size_t i1 = 2; i1 + 2 < n; ++i1) sup = std::max(sup, std::hypot(g1[i2 * n + i1], g2[i2 * n + i1]));
    const double eps = kPhiFloor * sup;
    std::vector<double> ratio;
    std::vector<std::size_t> used;
    std::size_t masked = 0;
    for (std::size_t i2 = 2; i2 + 2 < n; ++i2) {
        for (std::size_t i1 = 2; i1 + 2 < n; ++i1) {
            const std::size_t k = i2 * n + i1;
            if (g2[k] <= -eps || (sup == 0.0))
                throw ContractViolation("symmetry: d_2 u <= 0 at an interior node");
            if (g2[k] < eps) {
                ++masked;
                continue;
            }
            ratio.push_back(g1[k] / g2[k]);
            used.push_back(k);
        }
    }
    if (ratio.empty()) throw ContractViolation("symmetry: d_2 u vanishes on the interior");
    std::vector<double> sorted = ratio;
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(mid), sorted.end());
    double med = sorted[mid];
    if (sorted.size() % 2 == 0) {
        const double lo = *std::max_element(sorted.begin(), sorted.begin() + static_cast<long>(mid));
        med = 0.5 * (lo + med);
    }
    SymmetryMeasure r;
    r.a = unit({med, 1.0});
    r.masked = masked;
    double mis = 0.0;
    for (std::size_t k : used) mis = std::max(mis, std::abs(g1[k] - med * g2[k]));
    r.misalignment = mis / sup;
    return r;
}

GridFunction rotate_to_axis(const GridFunction& u, std::array<double, 2> a) {
    if (u.dim() != 2) throw DomainError("symmetry: 2-D field required");
    a = unit(a);
    std::shared_ptr<const Background> bg;
    if (u.background()) {
        const auto& b = u.background()->direction;
        auto nb = std::make_shared<Background>();
        nb->profile = u.background()->profile;
        nb->direction = {b[0] * a[1] - b[1] * a[0], b[0] * a[0] + b[1] * a[1]};
        bg = nb;
    }
    GridFunction out = GridFunction::make_2d(u.half_width(), u.n(), u.tail(), bg);
    const std::size_t n = u.n();
    for (std::size_t i2 = 0; i2 < n; ++i2) {
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double y1 = u.x(i1), y2 = u.x(i2);
            out.at(i1, i2) = u.eval2(y1 * a[1] + y2 * a[0], -y1 * a[0] + y2 * a[1]);
        }
    }
    return out;
}

GridFunction embed_profile(const GridFunction& profile, std::array<double, 2> a, double X, std::size_t n) {
    if (profile.dim() != 1 || profile.tail() == Tail::periodic)
        throw DomainError("symmetry: profile must be a non-periodic 1-D function");
    a = unit(a);
    auto bg = std::make_shared<Background>();
    bg->profile = std::make_shared<const GridFunction>(profile);
    bg->direction = a;
    GridFunction u = GridFunction::make_2d(X, n, Tail::layer, bg);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) u.at(i1, i2) = profile.eval(xi_of(a, u.x(i1), u.x(i2)));
    return u;
}

void validate(const Solve2DConfig& cfg) {
    if (!(cfg.X > 0.0)) throw ConfigError("symmetry: X must be positive");
    if (cfg.n < 16 || cfg.n > 96) throw ConfigError("symmetry: n must lie in [16, 96]");
    const std::array<double, 2> a = unit(cfg.direction);
    if (!(a[1] > 0.0)) throw ConfigError("symmetry: direction must have a positive second component");
    if (!(cfg.tol > 0.0)) throw ConfigError("symmetry: tol must be positive");
    if (cfg.max_iters == 0) throw ConfigError("symmetry: max_iters must be positive");
    if (cfg.init != "axis" && cfg.init != "exact" && cfg.init != "ramp")
        throw ConfigError("symmetry: init must be 'axis', 'ramp' or 'exact'");
}

Solve2DResult solve_2d_monotone(const SpectralMeasure& m, const Potential& p, const GridFunction& profile,
                                const Solve2DConfig& cfg) {
    validate(cfg);
    const std::size_t n = cfg.n;
    const std::size_t N = n * n;
    const std::array<double, 2> a = unit(cfg.direction);
    const GridFunction g = embed_profile(profile, a, cfg.X, n);
    const double h = g.h();
    const double cl = m.lap_mass();

    std::vector<double> b = background_frac_L(m, 0.0, *g.background(), cfg.X, n);
    if (cl > 0.0) {
        const GridFunction lg = neg_laplacian_h_2d(g);
        for (std::size_t k = 0; k < N; ++k) b[k] += cl * lg.values()[k];
    }
    const CompactOperator2D A(m, 0.0, h, n);
    auto apply_B = [&](const std::vector<double>& v, std::vector<double>& out) {
        A.apply(v, out);
        if (cl == 0.0) return;
        auto at = [&](long i1, long i2) -> double {
            if (i1 < 0 || i2 < 0 || i1 >= static_cast<long>(n) || i2 >= static_cast<long>(n)) return 0.0;
            return v[static_cast<std::size_t>(i2) * n + static_cast<std::size_t>(i1)];
        };
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            for (std::size_t i1 = 0; i1 < n; ++i1) {
                const long x = static_cast<long>(i1), y = static_cast<long>(i2);
                out[i2 * n + i1] += cl * (4.0 * at(x, y) - at(x + 1, y) - at(x - 1, y) - at(x, y + 1) - at(x, y - 1)) / (h * h);
            }
        }
    };
    double d2max = 0.0;
    for (int k = 0; k <= 2000; ++k) d2max = std::max(d2max, std::abs(p.d2W(-1.0 + 1e-3 * k)));
    const double Lip = A.symbol_max() + 8.0 * cl / (h * h) + d2max;
    const double tau = 1.0 / Lip;

    std::vector<unsigned char> free_node(N, 0);
    for (std::size_t i2 = 1; i2 + 1 < n; ++i2)
        for (std::size_t i1 = 1; i1 + 1 < n; ++i1) free_node[i2 * n + i1] = 1;

    const std::vector<double>& gv = g.values();
    std::vector<double> v(N, 0.0);
    if (cfg.init != "exact") {
        for (std::size_t i2 = 1; i2 + 1 < n; ++i2)
            for (std::size_t i1 = 1; i1 + 1 < n; ++i1) {
                const std::size_t k = i2 * n + i1;
                const double x2 = g.x(i2);
                const double u0 = cfg.init == "axis" ? profile.eval(x2) : 0.5 * x2;
                v[k] = std::clamp(u0, -1.0, 1.0) - gv[k];
            }
    }

    std::vector<double> y = v, vold = v, By(N), grad(N), Bv(N);
    auto residual = [&](const std::vector<double>& vv, std::vector<double>& Bvv) {
        apply_B(vv, Bvv);
        double r = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            if (!free_node[k]) continue;
            const double u = gv[k] + vv[k];
            const double gk = Bvv[k] + b[k] + p.dW(u);
            if (u >= 1.0 && gk < 0.0) continue;
            if (u <= -1.0 && gk > 0.0) continue;
            r = std::max(r, std::abs(gk));
        }
        return r;
    };

    Solve2DResult res;
    double tk = 1.0;
    double r = residual(v, Bv);
    std::size_t it = 0;
    constexpr std::size_t kCheckEvery = 10;
    while (r > cfg.tol && it < cfg.max_iters) {
        ++it;
        apply_B(y, By);
        double restart = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            if (!free_node[k]) continue;
            const double gk = By[k] + b[k] + p.dW(gv[k] + y[k]);
            const double un = std::clamp(gv[k] + y[k] - tau * gk, -1.0, 1.0);
            const double vn = un - gv[k];
            restart += gk * (vn - v[k]);
            vold[k] = v[k];
            v[k] = vn;
        }
        double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        if (restart > 0.0) tn = 1.0;
        const double beta = restart > 0.0 ? 0.0 : (tk - 1.0) / tn;
        for (std::size_t k = 0; k < N; ++k) {
            if (!free_node[k]) continue;
            y[k] = std::clamp(gv[k] + v[k] + beta * (v[k] - vold[k]), -1.0, 1.0) - gv[k];
        }
        tk = tn;
        if (it % kCheckEvery == 0) r = residual(v, Bv);
    }
    if (it % kCheckEvery != 0) r = residual(v, Bv);

    res.u = g;
    double perr = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        res.u.values()[k] = gv[k] + v[k];
        perr = std::max(perr, std::abs(v[k]));
    }
    res.residual = r;
    res.iterations = it;
    res.converged = r <= cfg.tol;
    res.profile_error = perr;
    return res;
}

double row_profile_error(const GridFunction& u, const GridFunction& profile) {
    if (u.dim() != 2 || profile.dim() != 1) throw DomainError("symmetry: 2-D field and 1-D profile required");
    const std::size_t n = u.n();
    double e = 0.0;
    for (std::size_t i2 = 0; i2 < n; ++i2) {
        const double ref = profile.eval(u.x(i2));
        for (std::size_t i1 = 0; i1 < n; ++i1) e = std::max(e, std::abs(u.at(i1, i2) - ref));
    }
    return e;
}

}  // namespace fraclayer
