// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fraclayer/config.hpp"
#include "fraclayer/energy.hpp"
#include "fraclayer/extension.hpp"
#include "fraclayer/layer_solver.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/parallel.hpp"
#include "fraclayer/symmetry.hpp"

using namespace fraclayer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double max_over_min(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

GridFunction arctan_layer(double X, std::size_t n) {
    return GridFunction::sample(X, n, Tail::layer, [](double x) { return 2.0 / kPi * std::atan(x); });
}

const LayerProfile& pn_layer() {
    static const LayerProfile lp = continuation_solve(Config::preset("pn-half").solver(), SpectralMeasure::single(0.5),
                                                      Potential::peierls_nabarro());
    return lp;
}

Outcome operator_correctness() {
    double symbol = 0.0, consistency = 0.0;
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        for (int k : {1, 2, 4}) {
            const GridFunction u = GridFunction::sample(kPi, 256, Tail::periodic, [&](double x) { return std::cos(k * x); });
            const GridFunction L = frac_laplacian_spectral(u, s);
            for (std::size_t i = 0; i < u.n(); ++i) symbol = std::max(symbol, std::abs(L[i] - std::pow(k, 2.0 * s) * u[i]) / std::pow(128.0, 2.0 * s));
        }
        const GridFunction b = GridFunction::sample(kPi, 2048, Tail::periodic, [](double x) {
            return std::cos(x) + 0.5 * std::sin(2.0 * x) + 0.3 * std::cos(5.0 * x);
        });
        consistency = std::max(consistency, backend_consistency(b, s));
    }
    return {symbol < 1e-14 && consistency < 1e-3,
            fmt("symbol error over operator norm %.2e", symbol) + fmt(", backend discrepancy %.2e", consistency)};
}

Outcome peierls_nabarro() {
    const GridFunction u = arctan_layer(200.0, 4096);
    const GridFunction L = frac_laplacian_quadrature(u, 0.5);
    double err = 0.0;
    for (std::size_t i = 0; i < u.n(); ++i)
        if (std::abs(u.x(i)) <= 10.0) err = std::max(err, std::abs(L[i] - std::sin(kPi * u[i]) / kPi));
    return {err < 1e-4, fmt("sup error on |x|<=10 %.2e", err)};
}

Outcome layer_recovery() {
    const LayerProfile& lp = pn_layer();
    double err = 0.0;
    for (std::size_t i = 0; i < lp.u.n(); ++i) err = std::max(err, std::abs(lp.u[i] - 2.0 / kPi * std::atan(lp.u.x(i))));
    return {lp.converged && err < 2e-2 && lp.monotone_defect == 0.0 && lp.odd_defect < 1e-3,
            fmt("sup error %.2e", err) + fmt(", monotone defect %g", lp.monotone_defect) +
                fmt(", odd defect %.1e", lp.odd_defect)};
}

Outcome energy_scaling() {
    bool ok = true;
    std::string detail;
    const std::vector<double> R_list = {4, 8, 16, 32, 64, 128};
    for (const char* preset : {"quartic-lowS", "pn-half", "quartic-highS"}) {
        const Config c = Config::preset(preset);
        const SpectralMeasure m = c.measure();
        const Potential p = c.potential();
        const LayerProfile lp = continuation_solve(c.energy_solver(), m, p);
        const auto rows = energy_scaling_scan(lp, m, p, R_list);
        std::vector<double> ratios;
        for (const auto& r : rows) ratios.push_back(r.ratio);
        const double spread = max_over_min(ratios);
        const double pe = fit_growth_exponent(rows).exponent;
        const double expected = 1.0 - 2.0 * m.s_star();
        ok = ok && lp.converged && spread < 10.0 && std::abs(pe - expected) < 0.1;
        detail += fmt("s*=%.2f: ", m.s_star()) + fmt("spread %.2f, ", spread) + fmt("exponent %.3f ", pe) +
                  fmt("(want %.2f); ", expected);
    }
    return {ok, detail};
}

Outcome claim41() {
    std::vector<double> r;
    for (double s : {0.25, 0.5, 0.75})
        for (double R = 2.0; R <= 256.0; R *= 2.0) r.push_back(claim41_integral(1, s, R) / phi(1, s, R));
    const double spread = max_over_min(r);
    return {spread < 10.0, fmt("max/min over s and R %.3f", spread)};
}

Outcome integration_by_parts() {
    const SpectralMeasure m = SpectralMeasure::single(0.5);
    const double X = 50.0;
    const std::size_t n = 2048;
    auto zero = [&](std::function<double(double)> f) { return GridFunction::sample(X, n, Tail::zero, f); };
    const GridFunction g = zero([](double x) { return std::exp(-x * x); });
    const GridFunction sech = zero([](double x) { return 1.0 / std::cosh(x - 0.5); });
    const GridFunction odd = zero([](double x) { return x * std::exp(-0.5 * x * x); });
    const GridFunction shifted = zero([](double x) { return std::exp(-(x - 1.0) * (x - 1.0)); });
    const GridFunction tanh = GridFunction::sample(X, n, Tail::layer, [](double x) { return std::tanh(x); });
    const GridFunction at = arctan_layer(X, n);
    double worst = 0.0;
    worst = std::max(worst, verify_ibp(g, sech, m, 8.0));
    worst = std::max(worst, verify_ibp(at, shifted, m, 8.0));
    worst = std::max(worst, verify_ibp(odd, tanh, m, 8.0));
    const double layer = verify_ibp(pn_layer().u, pn_layer().u, m, 8.0);
    return {worst < 1e-2 && layer < 1e-2, fmt("smooth pairs %.2e", worst) + fmt(", PN layer %.2e", layer)};
}

Outcome extension_system() {
    bool ok = true;
    double trace = 0.0, res = 0.0, dflux = 0.0;
    bool maxp = true, refine = true;
    const GridFunction& u = pn_layer().u;
    const SpectralMeasure m({{0.3, 0.5}, {0.5, 0.25}, {0.75, 0.25}}, 0.0);
    const ExtensionField f = extend(u, m, LambdaGrid::standard(u.h(), 40.0, 200));
    const ExtensionField fc = extend(u, m, LambdaGrid::standard(u.h(), 40.0, 100));
    const auto bounds = gradient_bound_check(f);
    for (std::size_t a = 0; a < f.atoms(); ++a) {
        trace = std::max(trace, trace_error(f, a));
        const double r = weighted_pde_residual(f, a), rc = weighted_pde_residual(fc, a);
        res = std::max(res, r);
        refine = refine && r < rc;
        maxp = maxp && bounds[a].max_ok;
        const FluxResult fr = neumann_flux(f, a);
        const double d = calibrate_d(f.s[a]).d;
        const GridFunction L = frac_laplacian_quadrature(u, f.s[a]);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < u.n(); ++i) {
            if (std::abs(u.x(i)) > u.half_width() - 2.0) continue;
            num = std::max(num, std::abs(d * fr.flux[i] - L[i]));
            den = std::max(den, std::abs(L[i]));
        }
        dflux = std::max(dflux, num / den);
    }
    const double d_half = std::abs(calibrate_d(0.5).d - 1.0);
    const ExtensionField fp = extend(u, SpectralMeasure::single(0.5), LambdaGrid::standard(u.h(), 40.0, 200));
    const double closure = neumann_closure(fp, Potential::peierls_nabarro(), 20.0);
    ok = trace < 1e-4 && maxp && res < 5e-2 && refine && d_half < 1e-3 && dflux < 1e-2 && closure < 5e-2;
    return {ok, fmt("trace %.1e", trace) + (maxp ? ", max principle ok" : ", max principle FAILED") +
                    fmt(", residual %.1e", res) + (refine ? " (decreasing)" : " (not decreasing)") +
                    fmt(", |d(1/2)-1| %.1e", d_half) + fmt(", flux rel %.1e", dflux) + fmt(", closure %.1e", closure)};
}

Outcome extended_energy() {
    double worst = 0.0;
    const GridFunction v = GridFunction::sample(30.0, 1201, Tail::zero, [](double x) { return std::exp(-x * x); });
    for (double s : {0.3, 0.5, 0.75}) {
        const SpectralMeasure m = SpectralMeasure::single(s);
        const ExtensionField f = extend(v, m, LambdaGrid::standard(v.h(), 27.0, 200));
        worst = std::max(worst, std::abs(extended_kinetic(f, m, 25.0) / kinetic_s(v, s, 25.0) - 1.0));
    }
    const GridFunction& u = pn_layer().u;
    const SpectralMeasure m = SpectralMeasure::single(0.5);
    const ExtensionField f = extend(u, m, LambdaGrid::standard(u.h(), 40.0, 200));
    std::vector<double> r;
    for (const auto& row : cylinder_ball_compare(f, u, m, Potential::peierls_nabarro(), {4, 8, 16, 32})) r.push_back(row.ratio);
    const double spread = max_over_min(r);
    return {worst < 1e-2 && spread < 10.0, fmt("compact identity rel %.1e", worst) + fmt(", cylinder/ball spread %.2f", spread)};
}

Outcome symmetry_2d() {
    const Config c = Config::preset("pn-half");
    SolverConfig pc = c.solver();
    pc.h = 0.05;
    const SpectralMeasure m = SpectralMeasure::single(0.5);
    const Potential p = Potential::peierls_nabarro();
    const LayerProfile lp = continuation_solve(pc, m, p);
    Solve2DConfig sc = c.symmetry_solver();
    const Solve2DResult tilted = solve_2d_monotone(m, p, lp.u, sc);
    const SymmetryMeasure sm = symmetry_measure_2d(tilted.u);
    sc.direction = {0.0, 1.0};
    sc.init = "ramp";
    const Solve2DResult axis = solve_2d_monotone(m, p, lp.u, sc);
    const double row = row_profile_error(axis.u, lp.u);
    const GridFunction e = embed_profile(lp.u, {1.0, 2.0}, 6.0, 96);
    const LiouvilleData data = liouville_data(e, m, LambdaGrid::standard(e.h(), 6.0, 100));
    double floor = 0.0;
    for (double R : {1.0, 2.0, 4.0}) floor = std::max(floor, liouville_D(data, m, R) / liouville_norm(data, m, R));
    return {tilted.converged && axis.converged && sm.misalignment < 5e-3 && row < 1e-3 && floor < 1e-6,
            fmt("%g^2 grid, ", double(tilted.u.n())) + fmt("misalignment %.1e", sm.misalignment) +
                fmt(", axis row error %.1e", row) + fmt(", D/norm %.1e", floor)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / "fraclayer_acceptance";
    fs::remove_all(base);
    const Config c = Config::preset("quartic-mix");
    set_thread_count(1);
    run_command(c, "all", (base / "t1").string());
    set_thread_count(4);
    run_command(c, "all", (base / "t4").string());
    set_thread_count(1);
    std::size_t files = 0, differ = 0;
    for (const auto& entry : fs::recursive_directory_iterator(base / "t1")) {
        if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
        ++files;
        const fs::path other = base / "t4" / fs::relative(entry.path(), base / "t1");
        if (slurp(entry.path()) != slurp(other)) {
            ++differ;
            std::printf("  differs: %s\n", fs::relative(entry.path(), base / "t1").c_str());
        }
    }
    fs::remove_all(base);
    return {files > 0 && differ == 0, fmt("%g artifacts compared", double(files)) + fmt(", %g differ", double(differ))};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion list[] = {
        {1, "operator correctness", 10, operator_correctness},
        {2, "Peierls-Nabarro closed form", 30, peierls_nabarro},
        {3, "layer recovery", 300, layer_recovery},
        {4, "energy scaling law", 600, energy_scaling},
        {5, "kernel bound sweep", 120, claim41},
        {6, "integration by parts", 120, integration_by_parts},
        {7, "extension system", 300, extension_system},
        {8, "extended energy identities", 300, extended_energy},
        {9, "one-dimensional symmetry in 2-D", 1800, symmetry_2d},
        {10, "determinism across thread counts", 1800, determinism},
    };
    int failed = 0;
    for (const Criterion& c : list) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && dt < c.budget_s;
        failed += pass ? 0 : 1;
        std::printf("criterion %2d %s: %s (%s; %.1f s of %.0f s)\n", c.id, c.name, pass ? "PASS" : "FAIL", o.detail.c_str(),
                    dt, c.budget_s);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
