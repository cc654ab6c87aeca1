/* Plain C client of the shared library. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "rauc/rauc.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

int main(void) {
    double kl, kh, khp;
    EXPECT(rauc_regime_constants(2, 1.0, NULL, &kl, &kh, &khp) == RAUC_OK);
    EXPECT(fabs(kl - 0.2032) < 5e-4 && fabs(kh - 0.3162) < 5e-4 && khp == 2.0 / 3);

    EXPECT(rauc_regime_constants(0, 1.0, NULL, &kl, &kh, &khp) == RAUC_E_DOMAIN);
    EXPECT(strlen(rauc_last_error()) > 0);
    EXPECT(rauc_regime_constants(2, 1.0, NULL, NULL, &kh, &khp) == RAUC_OK);

    rauc_class cls;
    EXPECT(rauc_parse_class("spa-rand", &cls) == RAUC_OK && cls == RAUC_CLASS_SPA_RAND);
    EXPECT(rauc_parse_class("nonsense", &cls) == RAUC_E_DOMAIN);
    EXPECT(strcmp(rauc_class_name(RAUC_CLASS_STD), "STD") == 0);

    rauc_instance one = {0.1, 1.0, 1, 1.0};
    double v;
    EXPECT(rauc_minimax_value(RAUC_CLASS_ALL, &one, NULL, &v) == RAUC_OK && fabs(v - exp(-1.0)) < 1e-12);

    double ls;
    rauc_regime rg;
    EXPECT(rauc_maximin_ratio(RAUC_CLASS_ALL, 2, 0.5, NULL, &ls, &rg) == RAUC_OK);
    EXPECT(fabs(ls - 0.7463) < 5e-5 && rg == RAUC_REGIME_HIGH);

    rauc_instance hi = {0.5, 1.0, 2, 1.0};
    rauc_solution* sol = NULL;
    EXPECT(rauc_solve(RAUC_CLASS_ALL, &hi, NULL, &sol) == RAUC_OK && sol);
    EXPECT(rauc_solution_value(sol, &v, &rg) == RAUC_OK && rg == RAUC_REGIME_HIGH);
    double xs[3] = {0.5, 0.75, 1.0}, ys[3];
    EXPECT(rauc_solution_eval(sol, "g_u", xs, 3, ys) == RAUC_OK && fabs(ys[2] - 1) < 1e-10);
    EXPECT(rauc_solution_eval(sol, "genspa_phi", xs, 3, ys) != RAUC_OK);
    EXPECT(rauc_solution_eval(sol, "bogus", xs, 3, ys) == RAUC_E_DOMAIN);
    double t[11], p[11];
    EXPECT(rauc_solution_normalized(sol, 11, t, p) == RAUC_OK && t[10] == 1.0 && fabs(p[10] - 1) < 1e-12);

    char* js = NULL;
    EXPECT(rauc_solution_json(sol, &js) == RAUC_OK && js && strstr(js, "\"HIGH\""));
    rauc_string_free(js);

    rauc_verify_options opt;
    rauc_verify_options_default(&opt);
    opt.perturbations = 20;
    int pass = 0;
    char* rep = NULL;
    EXPECT(rauc_verify(sol, &opt, NULL, &rep, &pass) == RAUC_OK && pass == 1 && rep);
    rauc_string_free(rep);

    double est, se;
    EXPECT(rauc_simulate(sol, 200000, 9, 2, &est, &se) == RAUC_OK && fabs(est - v) < 4 * se + 1e-12);
    rauc_solution_free(sol);
    rauc_solution_free(NULL);

    EXPECT(rauc_solve(RAUC_CLASS_ALL, NULL, NULL, &sol) == RAUC_E_NULL);
    rauc_instance bad = {2.0, 1.0, 2, 1.0};
    EXPECT(rauc_solve(RAUC_CLASS_ALL, &bad, NULL, &sol) == RAUC_E_DOMAIN);

    int ns[1] = {1};
    char* csv = NULL;
    EXPECT(rauc_table_csv(2, ns, 1, NULL, &csv) == RAUC_OK && strncmp(csv, "n,a_over_b,", 11) == 0);
    rauc_string_free(csv);
    EXPECT(rauc_table_csv(5, NULL, 0, NULL, &csv) == RAUC_E_DOMAIN);

    double gap;
    EXPECT(rauc_pricing_game(0.0, 1.0, 1.0, 1, 1, 5, &v, &gap) == RAUC_OK && v == 0.0);

    rauc_tolerance tol;
    rauc_tolerance_default(&tol);
    EXPECT(tol.quad_abs_tol > 0 && tol.max_iter > 0);
    EXPECT(strcmp(rauc_status_string(RAUC_OK), rauc_status_string(RAUC_E_IO)) != 0);

    if (failures) fprintf(stderr, "%d failures\n", failures);
    else printf("capi ok\n");
    return failures != 0;
}
