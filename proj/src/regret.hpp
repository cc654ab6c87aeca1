#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "domain.hpp"

namespace rauc {

class RepresentationMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

// Regret through F(v) only; g may jump where F is continuous.
double regret_form_F(const GuGdMechanism& mech, const PiecewiseCdf& F, const ProblemInstance& inst,
                     const Tolerance& tol = {});
// Regret through F' with atoms of F at a and b only; g arbitrary.
double regret_form_g(const GuGdMechanism& mech, const PiecewiseCdf& F, const ProblemInstance& inst,
                     const Tolerance& tol = {});
bool regret_form_F_applies(const GuGdMechanism& mech, const PiecewiseCdf& F);
bool regret_form_g_applies(const PiecewiseCdf& F);

double lambda_regret_quadrature(const GuGdMechanism& mech, const PiecewiseCdf& F, const ProblemInstance& inst,
                                const Tolerance& tol = {});

double lambda_regret_genspa(const PiecewiseCdf& phi, const PiecewiseCdf& F, const ProblemInstance& inst,
                            const Tolerance& tol = {});

struct McEstimate {
    double estimate = 0;
    double std_error = 0;
    std::size_t samples = 0;
};

// Samples are drawn in fixed chunks, each with its own (seed, chunk) stream,
// so results do not depend on the thread count.
McEstimate monte_carlo_regret(const GuGdMechanism& mech, const PiecewiseCdf& F, const ProblemInstance& inst,
                              std::size_t samples, std::uint64_t seed, unsigned threads = 0);
McEstimate monte_carlo_regret_genspa(const PiecewiseCdf& phi, const PiecewiseCdf& F, const ProblemInstance& inst,
                                     std::size_t samples, std::uint64_t seed, unsigned threads = 0);

// Total revenue for sorted top two valuations; ties at the top need no extra data.
double gugd_revenue(const GuGdMechanism& mech, double v1, double v2, const ProblemInstance& inst);
double genspa_revenue(const PiecewiseCdf& phi, double v1, double v2, const ProblemInstance& inst);

struct BestResponse {
    PiecewiseCdf F_hat;
    double regret = 0;          // value of the returned (monotone) CDF
    double relaxed_regret = 0;  // pointwise maximum, monotone or not
    bool isotonic = true;
    std::vector<double> cell_lo;
    std::vector<double> profile;
};

BestResponse nature_best_response(const GuGdMechanism& mech, const ProblemInstance& inst, std::size_t grid = 2001,
                                  const Tolerance& tol = {});
BestResponse nature_best_response_genspa(const PiecewiseCdf& phi, const ProblemInstance& inst,
                                         std::size_t grid = 2001, const Tolerance& tol = {});

struct FocSocReport {
    double foc_max_residual = 0;
    double soc_min = 0;
    bool pass = false;
};

FocSocReport check_foc_soc(const GuGdMechanism& mech, const PiecewiseCdf& F, const ProblemInstance& inst,
                           std::size_t grid = 2001);
FocSocReport check_foc_soc_genspa(const PiecewiseCdf& phi, const PiecewiseCdf& F, const ProblemInstance& inst,
                                  std::size_t grid = 2001);

struct OdeReport {
    double max_residual_1 = 0;  // on (r*, v*)
    double max_residual_2 = 0;  // on (v*, b)
    std::size_t points = 0;
};
// ODE residuals of the optimal g* for the ALL class.
OdeReport ode_residuals(const SaddleSolution& sol, std::size_t grid = 2001);

struct SaddleReport {
    MechanismClass cls = MechanismClass::All;
    Regime regime = Regime::Low;
    double value = 0;
    double quad_regret = 0;
    double quad_gap = 0;
    double nature_regret = 0;
    double nature_slack = 0;
    bool nature_isotonic = true;
    double seller_min_gap = 0;
    std::size_t seller_trials = 0;
    bool foc_applicable = true;
    double foc_max_residual = 0;
    double soc_min = 0;
    bool has_mc = false;
    McEstimate mc;
    bool pass = false;
    std::string note;

    json to_json() const;
};

struct VerifyOptions {
    std::size_t grid = 2001;
    std::size_t perturbations = 200;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 1;
    double value_tol = 1e-8;   // times b
    double seller_tol = 1e-8;  // times b
    double nature_c = 10;      // slack bound nature_c * b / grid
    double foc_tol = 1e-7;
    double soc_tol = 1e-12;
};

SaddleReport verify_saddle(MechanismClass cls, const ProblemInstance& inst, const VerifyOptions& opt = {},
                           const Tolerance& tol = {});
SaddleReport verify_solution(const SaddleSolution& sol, const VerifyOptions& opt = {}, const Tolerance& tol = {});

}  // namespace rauc
