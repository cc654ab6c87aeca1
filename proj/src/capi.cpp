#include "rauc/rauc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "mechanisms.hpp"
#include "oracle.hpp"
#include "ratio.hpp"
#include "regret.hpp"
#include "saddle.hpp"

struct rauc_solution {
    rauc::SaddleSolution sol;
};

namespace {

thread_local std::string g_error;

rauc_status fail(rauc_status s, const char* what) {
    g_error = what;
    return s;
}

// Every entry point funnels through here so no exception crosses the C boundary.
template <class Fn>
rauc_status guarded(Fn&& fn) {
    try {
        g_error.clear();
        fn();
        return RAUC_OK;
    } catch (const rauc::RepresentationMismatch& e) {
        return fail(RAUC_E_MISMATCH, e.what());
    } catch (const rauc::DomainError& e) {
        return fail(RAUC_E_DOMAIN, e.what());
    } catch (const rauc::NumericalError& e) {
        return fail(RAUC_E_NUMERICAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RAUC_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RAUC_E_INTERNAL, e.what());
    } catch (...) {
        return fail(RAUC_E_INTERNAL, "unknown error");
    }
}

rauc::Tolerance to_tol(const rauc_tolerance* t) {
    rauc::Tolerance q;
    if (t) {
        q.quad_abs_tol = t->quad_abs_tol;
        q.root_abs_tol = t->root_abs_tol;
        q.series_term_tol = t->series_term_tol;
        q.max_iter = t->max_iter;
    }
    q.validate();
    return q;
}

rauc::ProblemInstance to_inst(const rauc_instance* i) {
    rauc::ProblemInstance p{i->a, i->b, i->n, i->lambda};
    p.validate();
    return p;
}

rauc::MechanismClass to_cls(rauc_class c) {
    switch (c) {
        case RAUC_CLASS_ALL: return rauc::MechanismClass::All;
        case RAUC_CLASS_STD: return rauc::MechanismClass::Std;
        case RAUC_CLASS_SPA_RAND: return rauc::MechanismClass::SpaRand;
        case RAUC_CLASS_SPA_DET: return rauc::MechanismClass::SpaDet;
        case RAUC_CLASS_SPA_NO_RESERVE: return rauc::MechanismClass::SpaNoReserve;
    }
    throw rauc::DomainError("unknown mechanism class");
}

rauc_regime to_regime(rauc::Regime r) {
    switch (r) {
        case rauc::Regime::Low: return RAUC_REGIME_LOW;
        case rauc::Regime::Moderate: return RAUC_REGIME_MODERATE;
        default: return RAUC_REGIME_HIGH;
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

#define RAUC_NONNULL(p) \
    if (!(p)) return fail(RAUC_E_NULL, #p " is NULL")

}  // namespace

extern "C" {

const char* rauc_last_error(void) { return g_error.c_str(); }

const char* rauc_status_string(rauc_status s) {
    switch (s) {
        case RAUC_OK: return "ok";
        case RAUC_E_DOMAIN: return "domain error";
        case RAUC_E_NUMERICAL: return "numerical failure";
        case RAUC_E_MISMATCH: return "representation mismatch";
        case RAUC_E_IO: return "io error";
        case RAUC_E_NULL: return "null argument";
        case RAUC_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void rauc_tolerance_default(rauc_tolerance* out) {
    if (!out) return;
    rauc::Tolerance q;
    *out = {q.quad_abs_tol, q.root_abs_tol, q.series_term_tol, q.max_iter};
}

void rauc_verify_options_default(rauc_verify_options* out) {
    if (!out) return;
    rauc::VerifyOptions o;
    *out = {o.grid, o.perturbations, o.mc_samples, o.seed};
}

rauc_status rauc_parse_class(const char* name, rauc_class* out) {
    RAUC_NONNULL(name);
    RAUC_NONNULL(out);
    return guarded([&] {
        switch (rauc::parse_class(name)) {
            case rauc::MechanismClass::All: *out = RAUC_CLASS_ALL; break;
            case rauc::MechanismClass::Std: *out = RAUC_CLASS_STD; break;
            case rauc::MechanismClass::SpaRand: *out = RAUC_CLASS_SPA_RAND; break;
            case rauc::MechanismClass::SpaDet: *out = RAUC_CLASS_SPA_DET; break;
            case rauc::MechanismClass::SpaNoReserve: *out = RAUC_CLASS_SPA_NO_RESERVE; break;
        }
    });
}

const char* rauc_class_name(rauc_class c) {
    try {
        return rauc::to_string(to_cls(c));
    } catch (...) {
        return "unknown";
    }
}

const char* rauc_regime_name(rauc_regime r) {
    switch (r) {
        case RAUC_REGIME_LOW: return rauc::to_string(rauc::Regime::Low);
        case RAUC_REGIME_MODERATE: return rauc::to_string(rauc::Regime::Moderate);
        case RAUC_REGIME_HIGH: return rauc::to_string(rauc::Regime::High);
    }
    return "unknown";
}

rauc_status rauc_regime_constants(int n, double lambda, const rauc_tolerance* tol, double* k_l, double* k_h,
                                  double* k_h_prime) {
    return guarded([&] {
        auto rc = rauc::regime_constants(n, lambda, to_tol(tol));
        if (k_l) *k_l = rc.k_l;
        if (k_h) *k_h = rc.k_h;
        if (k_h_prime) *k_h_prime = rc.k_h_prime;
    });
}

rauc_status rauc_minimax_value(rauc_class cls, const rauc_instance* inst, const rauc_tolerance* tol,
                               double* out) {
    RAUC_NONNULL(inst);
    RAUC_NONNULL(out);
    return guarded([&] { *out = rauc::minimax_value(to_cls(cls), to_inst(inst), to_tol(tol)); });
}

rauc_status rauc_maximin_ratio(rauc_class cls, int n, double k, const rauc_tolerance* tol, double* lambda_star,
                               rauc_regime* regime) {
    RAUC_NONNULL(lambda_star);
    return guarded([&] {
        auto r = rauc::maximin_ratio(to_cls(cls), n, k, 1e-10, to_tol(tol));
        *lambda_star = r.lambda_star;
        if (regime) *regime = to_regime(r.regime);
    });
}

rauc_status rauc_pure_pool_onset(int n, const rauc_tolerance* tol, double* out) {
    RAUC_NONNULL(out);
    return guarded([&] { *out = rauc::pure_pool_onset(n, to_tol(tol)); });
}

rauc_status rauc_solve(rauc_class cls, const rauc_instance* inst, const rauc_tolerance* tol,
                       rauc_solution** out) {
    RAUC_NONNULL(inst);
    RAUC_NONNULL(out);
    *out = nullptr;
    return guarded([&] { *out = new rauc_solution{rauc::solve_class(to_cls(cls), to_inst(inst), to_tol(tol))}; });
}

void rauc_solution_free(rauc_solution* sol) { delete sol; }

rauc_status rauc_solution_value(const rauc_solution* sol, double* value, rauc_regime* regime) {
    RAUC_NONNULL(sol);
    if (value) *value = sol->sol.value;
    if (regime) *regime = to_regime(sol->sol.regime);
    return RAUC_OK;
}

rauc_status rauc_solution_eval(const rauc_solution* sol, const char* which, const double* v, size_t count,
                               double* out) {
    RAUC_NONNULL(sol);
    RAUC_NONNULL(which);
    if (count > 0 && (!v || !out)) return fail(RAUC_E_NULL, "v/out is NULL");
    return guarded([&] {
        const auto& s = sol->sol;
        const std::string w = which;
        const double a = s.instance.a, b = s.instance.b;
        for (size_t i = 0; i < count; ++i)
            if (!(v[i] >= a && v[i] <= b)) throw rauc::DomainError("eval point outside [a,b]");
        if (w == "F") {
            for (size_t i = 0; i < count; ++i) out[i] = s.worst_case(v[i]);
            return;
        }
        if (w == "genspa_phi") {
            if (!s.genspa_phi) throw rauc::DomainError("solution has no GenSPA reserve CDF");
            for (size_t i = 0; i < count; ++i) out[i] = (*s.genspa_phi)(v[i]);
            return;
        }
        if (!s.mechanism) throw rauc::DomainError("solution has no (g_u, g_d) mechanism");
        const auto& m = *s.mechanism;
        if (w == "g_u" || w == "g_d") {
            const auto& g = w == "g_u" ? m.g_u : m.g_d;
            for (size_t i = 0; i < count; ++i) out[i] = g(v[i]);
            return;
        }
        auto mx = rauc::gugd_to_mixture(m);
        const int n = s.instance.n;
        for (size_t i = 0; i < count; ++i) {
            double x = v[i];
            if (w == "phi") {
                if (x > mx.v_star) throw rauc::DomainError("phi is defined on [a, v*]");
                out[i] = mx.phi(x);
            } else if (w == "psi") {
                if (x < mx.v_star) throw rauc::DomainError("psi is defined on [v*, b]");
                out[i] = mx.psi(x);
            } else if (w == "unified") {
                out[i] = x < mx.v_star ? mx.phi(x) : 1 - n * mx.alpha + mx.psi(x);
            } else {
                throw rauc::DomainError("unknown curve '" + w + "'");
            }
        }
    });
}

rauc_status rauc_solution_normalized(const rauc_solution* sol, size_t grid, double* t, double* psi) {
    RAUC_NONNULL(sol);
    RAUC_NONNULL(t);
    RAUC_NONNULL(psi);
    return guarded([&] {
        auto pts = rauc::normalized_threshold_cdf(sol->sol, grid);
        for (size_t i = 0; i < pts.size(); ++i) t[i] = pts[i].first, psi[i] = pts[i].second;
    });
}

rauc_status rauc_solution_json(const rauc_solution* sol, char** out) {
    RAUC_NONNULL(sol);
    RAUC_NONNULL(out);
    return guarded([&] { *out = dup(sol->sol.to_json().dump(2)); });
}

rauc_status rauc_verify(const rauc_solution* sol, const rauc_verify_options* opt, const rauc_tolerance* tol,
                        char** report_json, int* pass) {
    RAUC_NONNULL(sol);
    return guarded([&] {
        rauc::VerifyOptions o;
        if (opt) {
            o.grid = opt->grid;
            o.perturbations = opt->perturbations;
            o.mc_samples = opt->mc_samples;
            o.seed = opt->seed;
        }
        auto rep = rauc::verify_solution(sol->sol, o, to_tol(tol));
        if (pass) *pass = rep.pass ? 1 : 0;
        if (report_json) *report_json = dup(rep.to_json().dump(2));
    });
}

rauc_status rauc_simulate(const rauc_solution* sol, size_t samples, uint64_t seed, unsigned threads,
                          double* estimate, double* std_error) {
    RAUC_NONNULL(sol);
    RAUC_NONNULL(estimate);
    return guarded([&] {
        const auto& s = sol->sol;
        rauc::McEstimate e = s.mechanism
                                 ? rauc::monte_carlo_regret(*s.mechanism, s.worst_case, s.instance, samples, seed,
                                                            threads)
                                 : rauc::monte_carlo_regret_genspa(*s.genspa_phi, s.worst_case, s.instance, samples,
                                                                   seed, threads);
        *estimate = e.estimate;
        if (std_error) *std_error = e.std_error;
    });
}

rauc_status rauc_table_csv(int which, const int* n_values, size_t n_count, const rauc_tolerance* tol,
                           char** out) {
    RAUC_NONNULL(out);
    return guarded([&] {
        auto q = to_tol(tol);
        if (which == 2) {
            std::vector<int> ns{1, 2, 3, 4, 8};
            if (n_values && n_count) ns.assign(n_values, n_values + n_count);
            *out = dup(rauc::ratio_table_by_n(ns, rauc::table2_ratios(), q).to_csv());
        } else if (which == 3) {
            int n = n_values && n_count ? n_values[0] : 4;
            using MC = rauc::MechanismClass;
            *out = dup(rauc::ratio_table_by_class(n, {MC::All, MC::Std, MC::SpaRand, MC::SpaDet, MC::SpaNoReserve},
                                                  rauc::table3_ratios(), q)
                           .to_csv());
        } else {
            throw rauc::DomainError("table must be 2 or 3");
        }
    });
}

rauc_status rauc_pricing_game(double a, double b, double lambda, size_t price_grid, size_t value_grid,
                              size_t iters, double* value, double* gap) {
    RAUC_NONNULL(value);
    return guarded([&] {
        auto r = rauc::pricing_game_value(a, b, lambda, price_grid, value_grid, iters);
        *value = r.value;
        if (gap) *gap = r.gap;
    });
}

void rauc_string_free(char* s) { std::free(s); }

}  // extern "C"
