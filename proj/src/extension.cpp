#include "fraclayer/extension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "fraclayer/energy.hpp"
#include "fraclayer/errors.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/parallel.hpp"
#include "fraclayer/rules.hpp"
#include "fraclayer/special.hpp"

namespace fraclayer {

namespace {

constexpr std::size_t kPeriodicImages = 64;
constexpr double kFluxTolerance = 1e-3;
constexpr double kEdge = 2.0;

double moment(double s, double lam_h, int p) {
    // int_0^1 t^p P_s(t, lam_h) dt in index units
    const double pn = poisson_norm(1, s);
    auto f = [&](double t) {
        return std::pow(t, p) * pn * std::pow(lam_h, 2.0 * s) * std::pow(t * t + lam_h * lam_h, -0.5 - s);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double split = std::min(1.0, lam_h);
    double r = GK::integrate(f, 0.0, split, 10, 1e-12);
    if (split < 1.0) r += GK::integrate(f, split, 1.0, 10, 1e-12);
    return r;
}

// Node weights w[1..K] and tail mass T; node K+1 sits in the exterior and joins T.
struct PoissonWeights {
    std::vector<double> w;
    double T;
};

PoissonWeights poisson_weights(double s, double h, double lambda, std::size_t K, bool even_fit) {
    const double lam_h = lambda / h;
    const double pn = poisson_norm(1, s);
    KernelSpec spec;
    spec.kernel = [=](double t) {
        return pn * std::pow(lam_h, 2.0 * s) * std::pow(t * t + lam_h * lam_h, -0.5 - s);
    };
    spec.p = 2.0;
    spec.q = even_fit ? 4.0 : 0.0;
    spec.moment_p = moment(s, lam_h, 2);
    spec.moment_q = even_fit ? moment(s, lam_h, 4) : 0.0;
    spec.tail = poisson_tail_1d(s, static_cast<double>(K) * h, lambda);
    const ProductRule r(spec, K);
    PoissonWeights pw{std::vector<double>(r.weights().begin(), r.weights().end() - 1), r.tail() + r.weights().back()};
    pw.w[0] = 0.0;
    return pw;
}

bool nonnegative(const std::vector<double>& w, double T) {
    return T >= 0.0 && std::all_of(w.begin(), w.end(), [](double v) { return v >= 0.0; });
}

std::vector<double> fold(const std::vector<double>& w, std::size_t n) {
    std::vector<double> W(n, 0.0);
    for (std::size_t j = 1; j < w.size(); ++j) W[j % n] += w[j];
    return W;
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double d4x(const double* row, std::size_t i, double h) {
    return (row[i - 2] - 8.0 * row[i - 1] + 8.0 * row[i + 1] - row[i + 2]) / (12.0 * h);
}

double d4xx(const double* row, std::size_t i, double h) {
    return (-row[i - 2] + 16.0 * row[i - 1] - 30.0 * row[i] + 16.0 * row[i + 1] - row[i + 2]) / (12.0 * h * h);
}

}  // namespace

double poisson_norm(int n, double s) {
    if (n < 1) throw DomainError("poisson: dimension must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("poisson: s must lie in (0, 1)");
    const double nd = static_cast<double>(n);
    return gamma_fn(0.5 * (nd + 2.0 * s)) / (std::pow(kPi, 0.5 * nd) * gamma_fn(s));
}

double poisson_kernel(int n, double s, double r, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("poisson: lambda must be positive");
    return poisson_norm(n, s) * std::pow(lambda, 2.0 * s) *
           std::pow(r * r + lambda * lambda, -0.5 * (static_cast<double>(n) + 2.0 * s));
}

double poisson_tail_1d(double s, double a, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("poisson: lambda must be positive");
    if (a <= 0.0) return 0.5;
    const double tau = a / lambda;
    return 0.5 * boost::math::ibeta(s, 0.5, 1.0 / (1.0 + tau * tau));
}

LambdaGrid LambdaGrid::geometric(double lambda_min, double lambda_max, std::size_t rows) {
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min) || rows < 5)
        throw DomainError("lambda grid: need 0 < lambda_min < lambda_max and at least 5 rows");
    LambdaGrid g;
    g.rho = std::pow(lambda_max / lambda_min, 1.0 / static_cast<double>(rows - 1));
    g.lambda.push_back(0.0);
    for (std::size_t j = 0; j < rows; ++j) g.lambda.push_back(lambda_min * std::pow(g.rho, static_cast<double>(j)));
    return g;
}

LambdaGrid LambdaGrid::standard(double h, double R_max, std::size_t rows) {
    return geometric(0.25 * h, R_max, rows);
}

std::vector<double> extend_row(const GridFunction& u, double s, double lambda) {
    if (u.dim() != 1) throw DomainError("extend: 1-D traces only");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("extend: s must lie in (0, 1)");
    const std::size_t n = u.n();
    const bool periodic = u.tail() == Tail::periodic;
    const std::size_t K = periodic ? kPeriodicImages * n : n;
    const double h = u.h();
    PoissonWeights pw = poisson_weights(s, h, lambda, K, true);
    auto usable = [&](const PoissonWeights& p) {
        return periodic ? nonnegative(fold(p.w, n), p.T) : nonnegative(p.w, p.T);
    };
    if (!usable(pw)) pw = poisson_weights(s, h, lambda, K, false);
    if (!usable(pw)) throw SolverError("extend: product weights lost positivity");
    const auto& w = pw.w;
    const double T = pw.T;
    const auto& v = u.values();
    std::vector<double> out(n);
    if (periodic) {
        const std::vector<double> W = fold(w, n);
        const double mean = pairwise_sum(v) / static_cast<double>(n);
        std::vector<double> e(3 * n);
        for (std::size_t k = 0; k < 3; ++k) std::copy(v.begin(), v.end(), e.begin() + static_cast<long>(k * n));
        parallel_for(n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double ui = v[i];
                const double* c = e.data() + n + i;
                double acc = 0.0;
                for (std::size_t j = 1; j < n; ++j) acc += W[j] * ((c[j] - ui) + (c[-static_cast<long>(j)] - ui));
                out[i] = ui + acc + 2.0 * T * (mean - ui);
            }
        });
        return out;
    }
    const double uL = u.left_value(), uR = u.right_value();
    const std::size_t K1 = w.size() - 1;
    const std::size_t pad = K1 + 1;
    std::vector<double> e(n + 2 * pad);
    std::fill(e.begin(), e.begin() + static_cast<long>(pad), uL);
    std::copy(v.begin(), v.end(), e.begin() + static_cast<long>(pad));
    std::fill(e.begin() + static_cast<long>(pad + n), e.end(), uR);
    parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double ui = v[i];
            const double* c = e.data() + pad + i;
            double acc = 0.0;
            for (std::size_t j = 1; j <= K1; ++j) acc += w[j] * ((c[j] - ui) + (c[-static_cast<long>(j)] - ui));
            out[i] = ui + acc + T * ((uL - ui) + (uR - ui));
        }
    });
    return out;
}

ExtensionField extend(const GridFunction& u, const SpectralMeasure& m, const LambdaGrid& grid) {
    if (u.dim() != 1) throw DomainError("extend: 1-D traces only");
    if (grid.rows() < 6) throw DomainError("extend: lambda grid too short");
    ExtensionField f;
    f.trace = u;
    f.grid = grid;
    f.lap_mass = m.lap_mass();
    const std::size_t n = u.n();
    for (const Atom& a : m.atoms()) {
        f.s.push_back(a.s);
        f.weight.push_back(a.weight);
        std::vector<double> sheet(grid.rows() * n);
        std::copy(u.values().begin(), u.values().end(), sheet.begin());
        for (std::size_t j = 1; j < grid.rows(); ++j) {
            const std::vector<double> row = extend_row(u, a.s, grid.lambda[j]);
            std::copy(row.begin(), row.end(), sheet.begin() + static_cast<long>(j * n));
        }
        f.sheets.push_back(std::move(sheet));
    }
    return f;
}

double weighted_pde_residual(const ExtensionField& f, const std::vector<double>& sheet, double s) {
    const std::size_t n = f.trace.n();
    const double h = f.trace.h();
    const double eta = std::log(f.grid.rho);
    const std::size_t M = f.grid.rows();
    const bool periodic = f.trace.tail() == Tail::periodic;
    const double edge = f.trace.half_width() - kEdge;
    double res = 0.0, grad = 0.0;
    for (std::size_t j = 2; j + 1 < M; ++j) {
        const double lam = f.grid.lambda[j];
        const double* row = sheet.data() + j * n;
        const double* up = row + n;
        const double* dn = row - n;
        for (std::size_t i = 2; i + 2 < n; ++i) {
            if (!periodic && std::abs(f.trace.x(i)) > edge) continue;
            const double ue = (up[i] - dn[i]) / (2.0 * eta);
            const double uee = (up[i] - 2.0 * row[i] + dn[i]) / (eta * eta);
            const double r = d4xx(row, i, h) + (uee - 2.0 * s * ue) / (lam * lam);
            res = std::max(res, lam * std::abs(r));
            const double gx = d4x(row, i, h);
            grad = std::max(grad, std::sqrt(gx * gx + (ue / lam) * (ue / lam)));
        }
    }
    if (grad == 0.0) return res == 0.0 ? 0.0 : INFINITY;
    return res / grad;
}

double weighted_pde_residual(const ExtensionField& f, std::size_t atom) {
    if (atom >= f.atoms()) throw DomainError("extension: atom index out of range");
    return weighted_pde_residual(f, f.sheets[atom], f.s[atom]);
}

namespace {

// Richardson-extrapolated 2s (u - u_j) / lambda_j^{2s} from rows j and j+1.
std::vector<double> flux_from_rows(const ExtensionField& f, const std::vector<double>& sheet, double s,
                                   std::size_t j) {
    const std::size_t n = f.trace.n();
    auto q = [&](std::size_t jj, std::size_t i) {
        return 2.0 * s * (sheet[i] - sheet[jj * n + i]) * std::pow(f.grid.lambda[jj], -2.0 * s);
    };
    const double r = std::pow(f.grid.rho, 2.0 - 2.0 * s);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (r * q(j, i) - q(j + 1, i)) / (r - 1.0);
    return out;
}

}  // namespace

FluxResult neumann_flux(const ExtensionField& f, std::size_t atom) {
    if (atom >= f.atoms()) throw DomainError("extension: atom index out of range");
    if (f.grid.rows() < 6) throw DomainError("extension: lambda grid too short for the flux");
    const double s = f.s[atom];
    std::vector<double> a = flux_from_rows(f, f.sheets[atom], s, 1);
    std::vector<double> b = flux_from_rows(f, f.sheets[atom], s, 2);
    double diff = 0.0;
    double scale = 0.0;
    const bool periodic = f.trace.tail() == Tail::periodic;
    const double edge = f.trace.half_width() - kEdge;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!periodic && std::abs(f.trace.x(i)) > edge) continue;
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(a[i]));
    }
    FluxResult r;
    r.rel_change = scale > 1e-12 ? diff / scale : diff;
    r.converged = r.rel_change <= kFluxTolerance;
    r.flux = GridFunction(f.trace.half_width(), std::move(a), f.trace.tail() == Tail::periodic ? Tail::periodic : Tail::zero);
    return r;
}

double trace_error(const ExtensionField& f, std::size_t atom) {
    if (atom >= f.atoms()) throw DomainError("extension: atom index out of range");
    const std::size_t M = f.grid.rows();
    if (M < 8) throw DomainError("extension: lambda grid too short");
    const std::size_t step = std::min<std::size_t>(10, (M - 2) / 2);
    const std::size_t rows[3] = {1, 1 + step, 1 + 2 * step};
    const double s = f.s[atom];
    // Lagrange-type weights c with sum_k c_k b(lambda_k) = b(0) for b in {1, lambda^{2s}, lambda^2}
    double A[3][3], rhs[3] = {1.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        const double l = f.grid.lambda[rows[k]];
        A[0][k] = 1.0;
        A[1][k] = std::pow(l, 2.0 * s);
        A[2][k] = l * l;
    }
    const double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                       A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                       A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    double c[3];
    for (int k = 0; k < 3; ++k) {
        double B[3][3];
        for (int r = 0; r < 3; ++r)
            for (int q = 0; q < 3; ++q) B[r][q] = q == k ? rhs[r] : A[r][q];
        c[k] = (B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) - B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0])) / det;
    }
    const GridFunction& u = f.trace;
    const std::size_t n = u.n();
    const auto& sh = f.sheets[atom];
    const bool periodic = u.tail() == Tail::periodic;
    const double edge = u.half_width() - kEdge;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!periodic && std::abs(u.x(i)) > edge) continue;
        double v = 0.0;
        for (int k = 0; k < 3; ++k) v += c[k] * sh[rows[k] * n + i];
        e = std::max(e, std::abs(v - u[i]));
    }
    return e;
}

namespace {

struct CalibrationCase {
    const char* name;
    Tail tail;
    double (*fn)(double);
};

double calib_gauss(double x) { return std::exp(-x * x); }
double calib_odd(double x) { return x * std::exp(-0.5 * x * x); }
double calib_front(double x) { return std::tanh(x); }
double calib_holdout(double x) { return 1.0 / ((1.0 + x * x) * (1.0 + x * x)); }

struct FluxPair {
    std::vector<double> F, L;
};

FluxPair flux_pair(double s, const CalibrationCase& c) {
    constexpr double X = 20.0;
    constexpr std::size_t n = 801;
    constexpr double fit_radius = 5.0;
    const GridFunction u = GridFunction::sample(X, n, c.tail, c.fn);
    const SpectralMeasure m = SpectralMeasure::single(s);
    const LambdaGrid grid = LambdaGrid::geometric(0.25 * u.h(), 0.25 * u.h() * std::pow(1.04, 7), 8);
    const ExtensionField f = extend(u, m, grid);
    const FluxResult fr = neumann_flux(f, 0);
    const GridFunction L = frac_laplacian_quadrature(u, s);
    FluxPair p;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(u.x(i)) > fit_radius) continue;
        p.F.push_back(fr.flux[i]);
        p.L.push_back(L[i]);
    }
    return p;
}

double rel_misfit(double d, const std::vector<FluxPair>& ps) {
    double num = 0.0, den = 0.0;
    for (const FluxPair& p : ps) {
        for (std::size_t i = 0; i < p.F.size(); ++i) {
            const double e = d * p.F[i] - p.L[i];
            num += e * e;
            den += p.L[i] * p.L[i];
        }
    }
    return std::sqrt(num / den);
}

std::mutex& calib_mutex() {
    static std::mutex m;
    return m;
}

std::map<double, Calibration>& calib_cache() {
    static std::map<double, Calibration> c;
    return c;
}

}  // namespace

Calibration calibrate_d(double s) {
    if (!(s >= 0.05 && s <= 0.95)) throw DomainError("calibrate_d: s must lie in [0.05, 0.95]");
    {
        std::lock_guard<std::mutex> lock(calib_mutex());
        auto it = calib_cache().find(s);
        if (it != calib_cache().end()) return it->second;
    }
    static const CalibrationCase fit_cases[] = {
        {"gauss", Tail::zero, calib_gauss}, {"odd", Tail::zero, calib_odd}, {"front", Tail::layer, calib_front}};
    static const CalibrationCase holdout = {"holdout", Tail::zero, calib_holdout};
    std::vector<FluxPair> fit;
    for (const auto& c : fit_cases) fit.push_back(flux_pair(s, c));
    double fl = 0.0, ff = 0.0;
    for (const FluxPair& p : fit) {
        for (std::size_t i = 0; i < p.F.size(); ++i) {
            fl += p.F[i] * p.L[i];
            ff += p.F[i] * p.F[i];
        }
    }
    Calibration c;
    c.d = fl / ff;
    c.fit_residual = rel_misfit(c.d, fit);
    c.holdout_residual = rel_misfit(c.d, {flux_pair(s, holdout)});
    c.trusted = c.fit_residual <= 1e-2;
    std::lock_guard<std::mutex> lock(calib_mutex());
    calib_cache()[s] = c;
    return c;
}

namespace {

// int over C_R of lambda^{1-2s} |grad u|^2 for one sheet
double sheet_dirichlet(const ExtensionField& f, const std::vector<double>& sheet, double s,
                       const std::vector<double>& flux, double R) {
    const GridFunction& u = f.trace;
    const std::size_t n = u.n();
    const double h = u.h();
    const auto [lo, hi] = ball_nodes(u, R);
    if (lo < 2 || hi + 2 >= n) throw DomainError("extension: cylinder too close to the box edge");
    const auto& lam = f.grid.lambda;
    const std::size_t M = f.grid.rows();
    const double Rl = u.x(hi);
    std::size_t J = 2;
    while (J + 1 < M && lam[J + 1] <= Rl) ++J;
    if (J + 2 >= M) throw DomainError("extension: lambda grid does not reach the cylinder top");
    const double eta = std::log(f.grid.rho);

    auto density = [&](std::size_t j, std::size_t i) {
        const double* row = sheet.data() + j * n;
        const double gx = d4x(row, i, h);
        const double gl = (sheet[(j + 1) * n + i] - sheet[(j - 1) * n + i]) / (2.0 * eta * lam[j]);
        // d lambda = lambda d eta
        return std::pow(lam[j], 2.0 - 2.0 * s) * (gx * gx + gl * gl);
    };

    std::vector<double> col(hi - lo + 1);
    parallel_for(col.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const std::size_t i = lo + k;
            double acc = 0.0;
            for (std::size_t j = 2; j <= J; ++j) {
                const double wj = (j == 2 || j == J) ? 0.5 : 1.0;
                acc += wj * density(j, i);
            }
            acc *= eta;
            // partial interval up to lambda = R
            const double t = std::log(Rl / lam[J]) / eta;
            const double dJ = density(J, i), dJ1 = density(J + 1, i);
            const double dR = dJ + t * (dJ1 - dJ);
            acc += 0.5 * (dJ + dR) * t * eta;
            // 0 < lambda < lambda_2 from the small-lambda expansion
            const double l2 = lam[2];
            const double gx = d4x(sheet.data() + 2 * n, i, h);
            acc += gx * gx * std::pow(l2, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
            acc += flux[i] * flux[i] * std::pow(l2, 2.0 * s) / (2.0 * s);
            col[k] = acc;
        }
    });
    col.front() *= 0.5;
    col.back() *= 0.5;
    return h * pairwise_sum(col);
}

}  // namespace

double extended_kinetic(const ExtensionField& f, const SpectralMeasure& m, double R) {
    if (m.atoms().size() != f.atoms()) throw DomainError("extension: measure does not match the field");
    double total = 0.0;
    for (std::size_t a = 0; a < f.atoms(); ++a) {
        const double s = f.s[a];
        const double d = calibrate_d(s).d;
        const FluxResult fr = neumann_flux(f, a);
        total += 0.5 * m.atoms()[a].weight * d * sheet_dirichlet(f, f.sheets[a], s, fr.flux.values(), R);
    }
    if (m.lap_mass() > 0.0) total += m.lap_mass() * kinetic_lap(f.trace, R);
    return total;
}

std::vector<CylinderBallRow> cylinder_ball_compare(const ExtensionField& f, const GridFunction& u,
                                                   const SpectralMeasure& m, const Potential& p,
                                                   const std::vector<double>& R_list) {
    std::vector<CylinderBallRow> rows;
    for (double R : R_list) {
        const EnergyBreakdown e = total_energy(u, m, p, R);
        const double K = e.total - e.potential;
        const double Kt = extended_kinetic(f, m, R);
        const double diff = std::abs(Kt - K);
        rows.push_back({e.R, Kt, K, diff, e.phi_ref, e.phi_ref > 0.0 ? diff / e.phi_ref : 0.0});
    }
    return rows;
}

std::vector<SheetBounds> gradient_bound_check(const ExtensionField& f) {
    const GridFunction& u = f.trace;
    const std::size_t n = u.n();
    const double h = u.h();
    const bool periodic = u.tail() == Tail::periodic;
    auto ext = [&](const double* row, long i) {
        if (periodic) return row[static_cast<std::size_t>((i % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n))];
        if (i < 0) return u.left_value();
        if (i >= static_cast<long>(n)) return u.right_value();
        return row[static_cast<std::size_t>(i)];
    };
    double sup_u = sup_abs(u.values());
    if (!periodic) sup_u = std::max({sup_u, std::abs(u.left_value()), std::abs(u.right_value())});
    double sup_du = 0.0;
    for (long i = -1; i < static_cast<long>(n); ++i)
        sup_du = std::max(sup_du, std::abs(ext(u.values().data(), i + 1) - ext(u.values().data(), i)) / h);

    std::vector<SheetBounds> out;
    const double eta = std::log(f.grid.rho);
    const std::size_t M = f.grid.rows();
    for (std::size_t a = 0; a < f.atoms(); ++a) {
        SheetBounds b{f.s[a], 0.0, sup_u, true, 0.0, sup_du, true, 0.0};
        const auto& sh = f.sheets[a];
        for (std::size_t j = 1; j < M; ++j) {
            const double* row = sh.data() + j * n;
            double lg = 0.0;
            for (long i = -1; i < static_cast<long>(n); ++i) {
                if (i >= 0) b.sup_sheet = std::max(b.sup_sheet, std::abs(row[i]));
                // exterior sheet values are approximated by the tails only in the difference test
                if (i >= 0 && i + 1 < static_cast<long>(n))
                    b.sup_grad_x = std::max(b.sup_grad_x, std::abs(row[i + 1] - row[i]) / h);
            }
            if (j >= 2 && j + 1 < M) {
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    const double gx = (row[i + 1] - row[i - 1]) / (2.0 * h);
                    const double gl = (sh[(j + 1) * n + i] - sh[(j - 1) * n + i]) / (2.0 * eta * f.grid.lambda[j]);
                    lg = std::max(lg, std::sqrt(gx * gx + gl * gl));
                }
                b.lambda_grad = std::max(b.lambda_grad, f.grid.lambda[j] * lg);
            }
        }
        b.max_ok = b.sup_sheet <= sup_u + 1e-10;
        b.grad_x_ok = b.sup_grad_x <= sup_du + 1e-10;
        out.push_back(b);
    }
    return out;
}

double neumann_closure(const ExtensionField& f, const Potential& p, double R) {
    const GridFunction& u = f.trace;
    std::vector<double> c(u.n(), 0.0);
    for (std::size_t a = 0; a < f.atoms(); ++a) {
        const double d = calibrate_d(f.s[a]).d;
        const FluxResult fr = neumann_flux(f, a);
        for (std::size_t i = 0; i < u.n(); ++i) c[i] += f.weight[a] * d * fr.flux[i];
    }
    if (f.lap_mass > 0.0) {
        const GridFunction lap = neg_laplacian_h(u);
        for (std::size_t i = 0; i < u.n(); ++i) c[i] += f.lap_mass * lap[i];
    }
    double r = 0.0;
    for (std::size_t i = 0; i < u.n(); ++i)
        if (std::abs(u.x(i)) <= R) r = std::max(r, std::abs(c[i] + p.dW(u[i])));
    return r;
}

}  // namespace fraclayer
