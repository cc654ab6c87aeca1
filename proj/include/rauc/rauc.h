#ifndef RAUC_RAUC_H
#define RAUC_RAUC_H

#include <stddef.h>
#include <stdint.h>

#if defined(RAUC_BUILDING)
#define RAUC_API __attribute__((visibility("default")))
#else
#define RAUC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    RAUC_OK = 0,
    RAUC_E_DOMAIN = 1,     /* bad arguments or a precondition failed */
    RAUC_E_NUMERICAL = 2,  /* root finder / quadrature gave up */
    RAUC_E_MISMATCH = 3,   /* no regret representation applies */
    RAUC_E_IO = 4,
    RAUC_E_NULL = 5,
    RAUC_E_INTERNAL = 6
} rauc_status;

typedef enum {
    RAUC_CLASS_ALL = 0,
    RAUC_CLASS_STD = 1,
    RAUC_CLASS_SPA_RAND = 2,
    RAUC_CLASS_SPA_DET = 3,
    RAUC_CLASS_SPA_NO_RESERVE = 4
} rauc_class;

typedef enum { RAUC_REGIME_LOW = 0, RAUC_REGIME_MODERATE = 1, RAUC_REGIME_HIGH = 2 } rauc_regime;

typedef struct {
    double quad_abs_tol;
    double root_abs_tol;
    double series_term_tol;
    int max_iter;
} rauc_tolerance;

typedef struct {
    double a, b;
    int n;
    double lambda;
} rauc_instance;

typedef struct {
    size_t grid;
    size_t perturbations;
    size_t mc_samples;
    uint64_t seed;
} rauc_verify_options;

typedef struct rauc_solution rauc_solution;

/* Message for the last failing call on this thread; never NULL. */
RAUC_API const char* rauc_last_error(void);
RAUC_API const char* rauc_status_string(rauc_status s);

RAUC_API void rauc_tolerance_default(rauc_tolerance* out);
RAUC_API void rauc_verify_options_default(rauc_verify_options* out);

/* Accepts all, std, spa-rand, spa-det, spa-no-reserve (also _ and spa-a). */
RAUC_API rauc_status rauc_parse_class(const char* name, rauc_class* out);
RAUC_API const char* rauc_class_name(rauc_class c);
RAUC_API const char* rauc_regime_name(rauc_regime r);

/* tol may be NULL for defaults everywhere below. */
RAUC_API rauc_status rauc_regime_constants(int n, double lambda, const rauc_tolerance* tol, double* k_l,
                                           double* k_h, double* k_h_prime);
RAUC_API rauc_status rauc_minimax_value(rauc_class cls, const rauc_instance* inst, const rauc_tolerance* tol,
                                        double* out);
RAUC_API rauc_status rauc_maximin_ratio(rauc_class cls, int n, double k, const rauc_tolerance* tol,
                                        double* lambda_star, rauc_regime* regime);
RAUC_API rauc_status rauc_pure_pool_onset(int n, const rauc_tolerance* tol, double* out);

RAUC_API rauc_status rauc_solve(rauc_class cls, const rauc_instance* inst, const rauc_tolerance* tol,
                                rauc_solution** out);
RAUC_API void rauc_solution_free(rauc_solution* sol);
RAUC_API rauc_status rauc_solution_value(const rauc_solution* sol, double* value, rauc_regime* regime);

/* which: "F" (worst case), "g_u", "g_d", "phi", "psi", "unified", "genspa_phi".
   Writes count values. */
RAUC_API rauc_status rauc_solution_eval(const rauc_solution* sol, const char* which, const double* v,
                                        size_t count, double* out);
/* Psi against normalized threshold (tau-a)/(b-a); POOL regime only.  t and psi hold grid values. */
RAUC_API rauc_status rauc_solution_normalized(const rauc_solution* sol, size_t grid, double* t, double* psi);

/* JSON text, release with rauc_string_free. */
RAUC_API rauc_status rauc_solution_json(const rauc_solution* sol, char** out);
RAUC_API rauc_status rauc_verify(const rauc_solution* sol, const rauc_verify_options* opt,
                                 const rauc_tolerance* tol, char** report_json, int* pass);
RAUC_API rauc_status rauc_simulate(const rauc_solution* sol, size_t samples, uint64_t seed, unsigned threads,
                                   double* estimate, double* std_error);

/* which = 2 (n_values may be NULL for the default rows) or 3 (n = n_values[0], default 4). CSV text. */
RAUC_API rauc_status rauc_table_csv(int which, const int* n_values, size_t n_count, const rauc_tolerance* tol,
                                    char** out);

RAUC_API rauc_status rauc_pricing_game(double a, double b, double lambda, size_t price_grid, size_t value_grid,
                                       size_t iters, double* value, double* gap);

RAUC_API void rauc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
