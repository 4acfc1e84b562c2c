/* C interface to the fraclayer library. */
#ifndef FRACLAYER_H
#define FRACLAYER_H

#include <stddef.h>

#if defined(FRACLAYER_BUILDING)
#define FL_API __attribute__((visibility("default")))
#else
#define FL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fl_status {
    FL_OK = 0,
    FL_ERR_ARGUMENT = 1,
    FL_ERR_CONTRACT = 2,
    FL_ERR_CONFIG = 3,
    FL_ERR_DOMAIN = 4,
    FL_ERR_SOLVER = 5,
    FL_ERR_INTERNAL = 6
} fl_status;

typedef enum fl_tail { FL_TAIL_ZERO = 0, FL_TAIL_LAYER = 1, FL_TAIL_PERIODIC = 2, FL_TAIL_CONSTANT = 3 } fl_tail;

typedef enum fl_backend { FL_BACKEND_QUADRATURE = 0, FL_BACKEND_SPECTRAL = 1 } fl_backend;

typedef struct fl_config fl_config;
typedef struct fl_grid fl_grid;
typedef struct fl_measure fl_measure;

FL_API const char* fl_version(void);
/* Message of the last failed call on this thread; empty if none. */
FL_API const char* fl_last_error(void);
FL_API fl_status fl_set_threads(int n);
FL_API int fl_get_threads(void);

/* configuration */
FL_API fl_status fl_config_defaults(fl_config** out);
FL_API fl_status fl_config_preset(const char* name, fl_config** out);
FL_API fl_status fl_config_load(fl_config* cfg, const char* path);
FL_API fl_status fl_config_merge(fl_config* cfg, const char* text);
FL_API fl_status fl_config_set(fl_config* cfg, const char* key, const char* json_value);
FL_API fl_status fl_config_validate(const fl_config* cfg);
/* Writes the resolved configuration as JSON. *needed includes the terminator. */
FL_API fl_status fl_config_dump(const fl_config* cfg, char* buf, size_t cap, size_t* needed);
FL_API void fl_config_free(fl_config* cfg);

FL_API size_t fl_preset_count(void);
FL_API const char* fl_preset_name(size_t i);
FL_API size_t fl_command_count(void);
FL_API const char* fl_command_name(size_t i);

/* Runs a subcommand. *exit_code receives 0 or 2 when the run completes. */
FL_API fl_status fl_run_command(const fl_config* cfg, const char* command, const char* out_dir, int* exit_code);

/* grid functions */
FL_API fl_status fl_grid_create(double X, size_t n, fl_tail tail, const double* values, fl_grid** out);
FL_API size_t fl_grid_size(const fl_grid* g);
FL_API double fl_grid_step(const fl_grid* g);
FL_API fl_status fl_grid_values(const fl_grid* g, double* out, size_t cap);
FL_API void fl_grid_free(fl_grid* g);

/* spectral measures */
FL_API fl_status fl_measure_create(const double* s, const double* weights, size_t count, double lap_mass,
                                   fl_measure** out);
FL_API double fl_measure_s_star(const fl_measure* m);
FL_API void fl_measure_free(fl_measure* m);

/* numerics */
FL_API fl_status fl_c_ns(int n, double s, double* out);
FL_API fl_status fl_phi(int n, double s, double R, double* out);
FL_API fl_status fl_frac_laplacian(const fl_grid* u, double s, fl_backend backend, fl_grid** out);
FL_API fl_status fl_kinetic_s(const fl_grid* u, double s, double R, double* out);
/* potential: "quartic" or "pn" */
FL_API fl_status fl_energy(const fl_grid* u, const fl_measure* m, const char* potential, double R, double* out);
FL_API fl_status fl_solve_layer(const fl_config* cfg, fl_grid** out, double* residual);
FL_API fl_status fl_calibrate_d(double s, double* d);
FL_API fl_status fl_neumann_flux(const fl_grid* u, double s, size_t rows, double lambda_max, fl_grid** out);

#ifdef __cplusplus
}
#endif

#endif
