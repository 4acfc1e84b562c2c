#include "fraclayer/layer_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraclayer/errors.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/parallel.hpp"

namespace fraclayer {

namespace {

constexpr double kArmijo = 1e-4;
constexpr std::size_t kFlatWindow = 50;
constexpr double kFlatDecrease = 1e-14;
constexpr std::size_t kLogEvery = 10;

std::size_t stage_points(double R, double h) {
    const double cells = 2.0 * R / h;
    const double rc = std::round(cells);
    if (std::abs(cells - rc) > 1e-6 * std::max(1.0, cells))
        throw ConfigError("solver: 2R must be a multiple of the grid spacing");
    return static_cast<std::size_t>(rc) + 1;
}

double max_abs_d2W(const Potential& p) {
    double m = 0.0;
    for (int k = 0; k <= 200; ++k) m = std::max(m, std::abs(p.d2W(-1.0 + 0.01 * k)));
    return m;
}

double clampv(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Linear interpolation onto a pinned stage grid.
GridFunction transfer(const GridFunction& from, double R, double h) {
    const std::size_t n = stage_points(R, h);
    GridFunction g(R, n, Tail::layer);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        double v;
        if (x <= -from.half_width()) {
            v = -1.0;
        } else if (x >= from.half_width()) {
            v = 1.0;
        } else {
            const double pos = (x + from.half_width()) / from.h();
            std::size_t j = std::min(static_cast<std::size_t>(pos), from.n() - 2);
            const double t = pos - static_cast<double>(j);
            v = (1.0 - t) * from[j] + t * from[j + 1];
        }
        g[i] = clampv(v, -1.0, 1.0);
    }
    g[0] = -1.0;
    g[n - 1] = 1.0;
    return g;
}

}  // namespace

void validate(const SolverConfig& cfg) {
    if (cfg.delta_schedule.empty() || cfg.R_schedule.empty()) throw ConfigError("solver: schedules must be nonempty");
    for (std::size_t k = 0; k < cfg.delta_schedule.size(); ++k) {
        const double d = cfg.delta_schedule[k];
        if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("solver: delta values must lie in [0, 1]");
        if (k > 0 && d > cfg.delta_schedule[k - 1]) throw ConfigError("solver: delta schedule must be descending");
    }
    for (std::size_t k = 0; k < cfg.R_schedule.size(); ++k) {
        if (!(cfg.R_schedule[k] >= 2.0)) throw ConfigError("solver: radii must be >= 2");
        if (k > 0 && cfg.R_schedule[k] < cfg.R_schedule[k - 1]) throw ConfigError("solver: R schedule must be ascending");
    }
    if (!(cfg.tol > 0.0)) throw ConfigError("solver: tol must be positive");
    if (!(cfg.step >= 0.0)) throw ConfigError("solver: step must be positive (0 selects it automatically)");
    if (!(cfg.h > 0.0)) throw ConfigError("solver: h must be positive");
    if (cfg.max_iters == 0) throw ConfigError("solver: max_iters must be positive");
    if (cfg.box_lo != -1.0 || cfg.box_hi != 1.0) throw ConfigError("solver: projection box is fixed to [-1, 1]");
}

SlidingResult sliding_check(const GridFunction& u) {
    if (u.dim() != 1) throw DomainError("sliding_check: 1-D functions only");
    SlidingResult r{0.0, 0.0};
    const std::size_t n = u.n();
    for (std::size_t i = 0; i + 1 < n; ++i) r.monotone_defect = std::max(r.monotone_defect, u[i] - u[i + 1]);
    for (std::size_t i = 0; i < n; ++i) r.odd_defect = std::max(r.odd_defect, std::abs(u[i] + u[n - 1 - i]));
    return r;
}

GridFunction ramp_profile(double R, double h) {
    const std::size_t n = stage_points(R, h);
    GridFunction g(R, n, Tail::layer);
    for (std::size_t i = 0; i < n; ++i) g[i] = clampv(g.x(i) / R, -1.0, 1.0);
    g[0] = -1.0;
    g[n - 1] = 1.0;
    return g;
}

double equation_residual(const GridFunction& u, const SpectralMeasure& m, const Potential& p, double margin) {
    GridFunction Lu = apply_L(OperatorSpec{m, 0.0, Backend::quadrature}, u);
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < u.n(); ++i) {
        if (std::abs(u.x(i)) > u.half_width() - margin) continue;
        r = std::max(r, std::abs(Lu[i] + p.dW(u[i])));
    }
    return r;
}

namespace {

struct StageResult {
    GridFunction u;
    StageRecord rec;
};

StageResult run_stage(const SpectralMeasure& m, const Potential& p, double delta, double R,
                      const GridFunction& init, const SolverConfig& cfg, std::size_t stage,
                      std::vector<IterRecord>& log) {
    const double h = cfg.h;
    GridFunction u = transfer(init, R, h);
    const std::size_t n = u.n();
    QuadratureOperator1D op(m, delta, h, n);
    const double L = op.symbol_max() + max_abs_d2W(p);
    const double tau0 = cfg.step > 0.0 ? cfg.step : 1.0 / L;

    std::vector<double> zero(n, 0.0);
    zero[0] = -1.0;
    zero[n - 1] = 1.0;
    std::vector<double> c(n), r(n), rt(n), ut(n), tmp(n);
    op.apply(zero.data(), -1.0, 1.0, c.data());

    auto energy = [&](const std::vector<double>& v, const std::vector<double>& rv) {
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = (i == 0 || i + 1 == n) ? 0.0 : 0.5 * v[i] * (rv[i] + c[i]) + p.W(v[i]);
        return h * pairwise_sum(tmp);
    };
    auto proj_grad = [&](const std::vector<double>& v, const std::vector<double>& rv) {
        double g = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double gi = rv[i] + p.dW(v[i]);
            if (v[i] >= 1.0 && gi < 0.0) continue;
            if (v[i] <= -1.0 && gi > 0.0) continue;
            g = std::max(g, std::abs(gi));
        }
        return g;
    };

    op.apply(u.values().data(), -1.0, 1.0, r.data());
    double E = energy(u.values(), r);
    double gnorm = proj_grad(u.values(), r);
    double tau = tau0;
    std::size_t flat_count = 0;
    bool converged = gnorm <= cfg.tol;
    bool flat = false;
    std::size_t it = 0;

    auto record = [&](std::size_t iter) {
        const SlidingResult sr = sliding_check(u);
        log.push_back({stage, iter, E, gnorm, sr.monotone_defect, sr.odd_defect});
    };
    record(0);

    while (!converged && !flat && it < cfg.max_iters) {
        ++it;
        bool accepted = false;
        double Et = E;
        while (!accepted) {
            double gd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == 0 || i + 1 == n) {
                    ut[i] = u[i];
                    continue;
                }
                const double gi = r[i] + p.dW(u[i]);
                ut[i] = clampv(u[i] - tau * gi, -1.0, 1.0);
                tmp[i] = gi * (ut[i] - u[i]);
            }
            tmp[0] = tmp[n - 1] = 0.0;
            gd = h * pairwise_sum(tmp);
            op.apply(ut.data(), -1.0, 1.0, rt.data());
            Et = energy(ut, rt);
            if (Et <= E + kArmijo * gd) {
                accepted = true;
            } else {
                tau *= 0.5;
                if (tau < 1e-12 * tau0) break;
            }
        }
        if (!accepted) {
            flat = true;
            break;
        }
        if (Et > E) {
            std::ostringstream os;
            os << "solver: energy increased at stage " << stage << " iteration " << it;
            throw SolverError(os.str());
        }
        const double decrease = E - Et;
        u.values().swap(ut);
        r.swap(rt);
        E = Et;
        gnorm = proj_grad(u.values(), r);
        converged = gnorm <= cfg.tol;
        flat_count = decrease < kFlatDecrease * std::max(1.0, std::abs(E)) ? flat_count + 1 : 0;
        if (flat_count >= kFlatWindow && !converged) flat = true;
        if (it % kLogEvery == 0 || converged || flat) record(it);
    }
    if (log.back().iter != it) record(it);

    double d2 = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (std::abs(u.x(i)) <= R - 1.0) d2 = std::max(d2, std::abs(u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h));
    StageRecord rec{stage, R, delta, it, gnorm, E, converged, flat, d2};
    return {std::move(u), rec};
}

LayerProfile finish(GridFunction u, const SpectralMeasure& m, const Potential& p, double delta) {
    LayerProfile out;
    const SlidingResult sr = sliding_check(u);
    out.monotone_defect = sr.monotone_defect;
    out.odd_defect = sr.odd_defect;
    out.limit_left = u[0];
    out.limit_right = u[u.n() - 1];
    GridFunction Lu = apply_L(OperatorSpec{m, delta, Backend::quadrature}, u);
    double res = 0.0;
    for (std::size_t i = 1; i + 1 < u.n(); ++i) res = std::max(res, std::abs(Lu[i] + p.dW(u[i])));
    out.residual = res;
    out.u = std::move(u);
    return out;
}

}  // namespace

LayerProfile solve_truncated(const SpectralMeasure& m, const Potential& p, double delta, double R,
                             const GridFunction& init, const SolverConfig& cfg) {
    if (init.dim() != 1) throw DomainError("solver: 1-D initial data required");
    for (double v : init.values())
        if (!(std::abs(v) <= 1.0)) throw DomainError("solver: initial data must satisfy |u| <= 1");
    std::vector<IterRecord> log;
    StageResult sr = run_stage(m, p, delta, R, init, cfg, 0, log);
    LayerProfile out = finish(std::move(sr.u), m, p, delta);
    out.converged = sr.rec.converged || sr.rec.flat;
    out.stages.push_back(sr.rec);
    out.log = std::move(log);
    return out;
}

LayerProfile continuation_solve(const SolverConfig& cfg, const SpectralMeasure& m, const Potential& p) {
    validate(cfg);
    const std::size_t stages = std::max(cfg.R_schedule.size(), cfg.delta_schedule.size());
    auto pick = [](const std::vector<double>& v, std::size_t k) { return v[std::min(k, v.size() - 1)]; };
    std::vector<IterRecord> log;
    std::vector<StageRecord> recs;
    GridFunction u = ramp_profile(pick(cfg.R_schedule, 0), cfg.h);
    double delta = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < stages; ++k) {
        const double R = pick(cfg.R_schedule, k);
        delta = pick(cfg.delta_schedule, k);
        StageResult sr;
        try {
            sr = run_stage(m, p, delta, R, u, cfg, k, log);
        } catch (const SolverError& e) {
            std::ostringstream os;
            os << "stage " << k << ": " << e.what();
            throw SolverError(os.str());
        }
        ok = ok && (sr.rec.converged || sr.rec.flat);
        recs.push_back(sr.rec);
        u = std::move(sr.u);
    }
    LayerProfile out = finish(std::move(u), m, p, delta);
    out.converged = ok;
    out.stages = std::move(recs);
    out.log = std::move(log);
    return out;
}

double competitor_psi(double x, double R) {
    const double a = std::abs(x);
    if (a <= R - 2.0) return 1.0;
    if (a <= R) return R - 1.0 - a;
    return -1.0;
}

CompetitorResult competitor_energy_test(const SpectralMeasure& m, const Potential& p, double R,
                                        const GridFunction* u) {
    if (!(R >= 4.0)) throw DomainError("competitor: R must be >= 4");
    GridFunction w;
    if (u) {
        w = *u;
    } else {
        // the stalled candidate u = 0
        const double h = 1.0 / 16.0;
        const double X = R + 4.0;
        w = GridFunction(X, static_cast<std::size_t>(std::llround(2.0 * X / h)) + 1, Tail::zero);
    }
    for (std::size_t i = 0; i < w.n(); ++i) w[i] = std::max(w[i], competitor_psi(w.x(i), R));
    CompetitorResult r;
    r.E_trivial_lower = 2.0 * R * p.W(0.0);
    r.E_competitor = total_energy(w, m, p, R).total;
    return r;
}

std::vector<ScanRow> energy_scaling_scan(const LayerProfile& u, const SpectralMeasure& m, const Potential& p,
                                         const std::vector<double>& R_list) {
    std::vector<ScanRow> rows;
    for (double R : R_list) {
        if (R > u.u.half_width() - 2.0) throw DomainError("energy scan: R exceeds X - 2");
        EnergyBreakdown e = total_energy(u.u, m, p, R);
        rows.push_back({e.R, e.total, e.phi_ref, e.phi_ref > 0.0 ? e.total / e.phi_ref : 0.0, e});
    }
    return rows;
}

namespace {

struct LinFit {
    double A, B, rms;
};

LinFit fit_for(double pexp, const std::vector<ScanRow>& rows) {
    double s1 = 0, sf = 0, sff = 0, se = 0, sfe = 0;
    const double n = static_cast<double>(rows.size());
    std::vector<double> f(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double L = std::log(rows[k].R);
        f[k] = pexp == 0.0 ? L : std::expm1(pexp * L) / pexp;
        s1 += 1.0;
        sf += f[k];
        sff += f[k] * f[k];
        se += rows[k].energy;
        sfe += f[k] * rows[k].energy;
    }
    const double det = s1 * sff - sf * sf;
    LinFit r{0, 0, 0};
    r.B = (s1 * sfe - sf * se) / det;
    r.A = (se - r.B * sf) / s1;
    double ss = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double d = rows[k].energy - r.A - r.B * f[k];
        ss += d * d;
    }
    r.rms = std::sqrt(ss / n);
    return r;
}

}  // namespace

GrowthFit fit_growth_exponent(const std::vector<ScanRow>& rows) {
    if (rows.size() < 3) throw DomainError("growth fit: need at least three radii");
    double best_p = 0.0;
    LinFit best{0, 0, std::numeric_limits<double>::infinity()};
    for (int k = -2000; k <= 1500; ++k) {
        const double pe = 1e-3 * k;
        const LinFit f = fit_for(pe, rows);
        if (f.rms < best.rms) {
            best = f;
            best_p = pe;
        }
    }
    return {best_p, best.A, best.B, best.rms};
}

}  // namespace fraclayer
