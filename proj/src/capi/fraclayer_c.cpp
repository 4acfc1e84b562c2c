#include "fraclayer/fraclayer.h"

#include <cstring>
#include <string>

#include "fraclayer/config.hpp"
#include "fraclayer/energy.hpp"
#include "fraclayer/errors.hpp"
#include "fraclayer/extension.hpp"
#include "fraclayer/layer_solver.hpp"
#include "fraclayer/operator.hpp"
#include "fraclayer/parallel.hpp"
#include "fraclayer/version.hpp"

struct fl_config {
    fraclayer::Config cfg;
};
struct fl_grid {
    fraclayer::GridFunction u;
};
struct fl_measure {
    fraclayer::SpectralMeasure m;
};

namespace {

thread_local std::string last_error;

fl_status fail(fl_status code, const char* what) {
    last_error = what;
    return code;
}

template <class F>
fl_status guard(F f) {
    try {
        f();
        last_error.clear();
        return FL_OK;
    } catch (const fraclayer::ConfigError& e) {
        return fail(FL_ERR_CONFIG, e.what());
    } catch (const fraclayer::DomainError& e) {
        return fail(FL_ERR_DOMAIN, e.what());
    } catch (const fraclayer::ContractViolation& e) {
        return fail(FL_ERR_CONTRACT, e.what());
    } catch (const fraclayer::SolverError& e) {
        return fail(FL_ERR_SOLVER, e.what());
    } catch (const std::exception& e) {
        return fail(FL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FL_ERR_INTERNAL, "unknown error");
    }
}

#define FL_REQUIRE(cond)                                             \
    do {                                                             \
        if (!(cond)) return fail(FL_ERR_ARGUMENT, "null argument: " #cond); \
    } while (0)

fraclayer::Tail to_tail(fl_tail t) {
    switch (t) {
    case FL_TAIL_ZERO: return fraclayer::Tail::zero;
    case FL_TAIL_LAYER: return fraclayer::Tail::layer;
    case FL_TAIL_PERIODIC: return fraclayer::Tail::periodic;
    case FL_TAIL_CONSTANT: return fraclayer::Tail::constant;
    }
    throw fraclayer::DomainError("unknown tail");
}

const std::vector<std::string>& presets() {
    static const std::vector<std::string> v = fraclayer::Config::preset_names();
    return v;
}

const std::vector<std::string>& command_list() {
    static const std::vector<std::string> v = fraclayer::command_names();
    return v;
}

}  // namespace

extern "C" {

FL_API const char* fl_version(void) { return fraclayer::kVersion; }

FL_API const char* fl_last_error(void) { return last_error.c_str(); }

FL_API fl_status fl_set_threads(int n) {
    if (n < 1) return fail(FL_ERR_ARGUMENT, "threads must be positive");
    return guard([&] { fraclayer::set_thread_count(n); });
}

FL_API int fl_get_threads(void) { return fraclayer::thread_count(); }

FL_API fl_status fl_config_defaults(fl_config** out) {
    FL_REQUIRE(out);
    return guard([&] { *out = new fl_config{fraclayer::Config::defaults()}; });
}

FL_API fl_status fl_config_preset(const char* name, fl_config** out) {
    FL_REQUIRE(name && out);
    return guard([&] { *out = new fl_config{fraclayer::Config::preset(name)}; });
}

FL_API fl_status fl_config_load(fl_config* cfg, const char* path) {
    FL_REQUIRE(cfg && path);
    return guard([&] { cfg->cfg.merge_file(path); });
}

FL_API fl_status fl_config_merge(fl_config* cfg, const char* text) {
    FL_REQUIRE(cfg && text);
    return guard([&] { cfg->cfg.merge_text(text); });
}

FL_API fl_status fl_config_set(fl_config* cfg, const char* key, const char* json_value) {
    FL_REQUIRE(cfg && key && json_value);
    return guard([&] { cfg->cfg.set(key, json_value); });
}

FL_API fl_status fl_config_validate(const fl_config* cfg) {
    FL_REQUIRE(cfg);
    return guard([&] { cfg->cfg.validate(); });
}

FL_API fl_status fl_config_dump(const fl_config* cfg, char* buf, size_t cap, size_t* needed) {
    FL_REQUIRE(cfg);
    return guard([&] {
        const std::string s = cfg->cfg.dump();
        if (needed) *needed = s.size() + 1;
        if (buf && cap > 0) {
            const std::size_t k = std::min(cap - 1, s.size());
            std::memcpy(buf, s.data(), k);
            buf[k] = '\0';
        }
    });
}

FL_API void fl_config_free(fl_config* cfg) { delete cfg; }

FL_API size_t fl_preset_count(void) { return presets().size(); }

FL_API const char* fl_preset_name(size_t i) { return i < presets().size() ? presets()[i].c_str() : nullptr; }

FL_API size_t fl_command_count(void) { return command_list().size(); }

FL_API const char* fl_command_name(size_t i) {
    return i < command_list().size() ? command_list()[i].c_str() : nullptr;
}

FL_API fl_status fl_run_command(const fl_config* cfg, const char* command, const char* out_dir, int* exit_code) {
    FL_REQUIRE(cfg && command && out_dir && exit_code);
    return guard([&] { *exit_code = fraclayer::run_command(cfg->cfg, command, out_dir); });
}

FL_API fl_status fl_grid_create(double X, size_t n, fl_tail tail, const double* values, fl_grid** out) {
    FL_REQUIRE(out);
    return guard([&] {
        fraclayer::GridFunction g(X, n, to_tail(tail));
        if (values) std::copy(values, values + g.values().size(), g.values().begin());
        *out = new fl_grid{std::move(g)};
    });
}

FL_API size_t fl_grid_size(const fl_grid* g) { return g ? g->u.values().size() : 0; }

FL_API double fl_grid_step(const fl_grid* g) { return g ? g->u.h() : 0.0; }

FL_API fl_status fl_grid_values(const fl_grid* g, double* out, size_t cap) {
    FL_REQUIRE(g && out);
    if (cap < g->u.values().size()) return fail(FL_ERR_ARGUMENT, "output buffer too small");
    std::copy(g->u.values().begin(), g->u.values().end(), out);
    last_error.clear();
    return FL_OK;
}

FL_API void fl_grid_free(fl_grid* g) { delete g; }

FL_API fl_status fl_measure_create(const double* s, const double* weights, size_t count, double lap_mass,
                                   fl_measure** out) {
    FL_REQUIRE(out && (count == 0 || (s && weights)));
    return guard([&] {
        std::vector<fraclayer::Atom> atoms;
        for (size_t i = 0; i < count; ++i) atoms.push_back({s[i], weights[i]});
        *out = new fl_measure{fraclayer::SpectralMeasure(std::move(atoms), lap_mass)};
    });
}

FL_API double fl_measure_s_star(const fl_measure* m) { return m ? m->m.s_star() : 0.0; }

FL_API void fl_measure_free(fl_measure* m) { delete m; }

FL_API fl_status fl_c_ns(int n, double s, double* out) {
    FL_REQUIRE(out);
    return guard([&] { *out = fraclayer::c_ns(n, s); });
}

FL_API fl_status fl_phi(int n, double s, double R, double* out) {
    FL_REQUIRE(out);
    return guard([&] { *out = fraclayer::phi(n, s, R); });
}

FL_API fl_status fl_frac_laplacian(const fl_grid* u, double s, fl_backend backend, fl_grid** out) {
    FL_REQUIRE(u && out);
    return guard([&] {
        fraclayer::GridFunction r = backend == FL_BACKEND_SPECTRAL ? fraclayer::frac_laplacian_spectral(u->u, s)
                                                                   : fraclayer::frac_laplacian_quadrature(u->u, s);
        *out = new fl_grid{std::move(r)};
    });
}

FL_API fl_status fl_kinetic_s(const fl_grid* u, double s, double R, double* out) {
    FL_REQUIRE(u && out);
    return guard([&] { *out = fraclayer::kinetic_s(u->u, s, R); });
}

FL_API fl_status fl_energy(const fl_grid* u, const fl_measure* m, const char* potential, double R, double* out) {
    FL_REQUIRE(u && m && potential && out);
    return guard([&] {
        const std::string name = potential;
        fraclayer::Potential p = name == "pn" ? fraclayer::Potential::peierls_nabarro()
                                 : name == "quartic"
                                     ? fraclayer::Potential::quartic()
                                     : throw fraclayer::DomainError("unknown potential '" + name + "'");
        *out = fraclayer::total_energy(u->u, m->m, p, R).total;
    });
}

FL_API fl_status fl_solve_layer(const fl_config* cfg, fl_grid** out, double* residual) {
    FL_REQUIRE(cfg && out);
    return guard([&] {
        cfg->cfg.validate();
        fraclayer::LayerProfile lp = fraclayer::continuation_solve(cfg->cfg.solver(), cfg->cfg.measure(),
                                                                   cfg->cfg.potential());
        if (residual) *residual = lp.residual;
        *out = new fl_grid{std::move(lp.u)};
    });
}

FL_API fl_status fl_calibrate_d(double s, double* d) {
    FL_REQUIRE(d);
    return guard([&] { *d = fraclayer::calibrate_d(s).d; });
}

FL_API fl_status fl_neumann_flux(const fl_grid* u, double s, size_t rows, double lambda_max, fl_grid** out) {
    FL_REQUIRE(u && out);
    return guard([&] {
        const fraclayer::ExtensionField f = fraclayer::extend(u->u, fraclayer::SpectralMeasure::single(s),
                                                             fraclayer::LambdaGrid::standard(u->u.h(), lambda_max, rows));
        *out = new fl_grid{fraclayer::neumann_flux(f, 0).flux};
    });
}

}  // extern "C"
