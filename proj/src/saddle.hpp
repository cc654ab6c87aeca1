#pragma once

#include "domain.hpp"

namespace rauc {

struct RegimeConstants {
    double k_l = 0;
    double k_h = 1;
    double k_h_prime = 1;
};

RegimeConstants regime_constants(int n, double lambda, const Tolerance& tol = {});

// Defining-equation residuals, written exactly as the integral equations
// (integrals evaluated by the series kernels).
double k_l_residual(int n, double lambda, double k, const Tolerance& tol = {});
double k_h_residual(int n, double lambda, double k, const Tolerance& tol = {});

struct ModerateRoot {
    double v_star = 0;
    double alpha = 0;
    double residual_1 = 0;
    double residual_2 = 0;
};

// (v*, alpha) for the interpolating regime, k_l <= a/b <= k_h.
ModerateRoot solve_moderate(const ProblemInstance& inst, const Tolerance& tol = {});

// GenSPA normalizing constant c with Phi*(b) = 1 (a/b >= k_l, n >= 2).
double genspa_constant(const ProblemInstance& inst, const Tolerance& tol = {});

struct SpaRandModerate {
    double F0, r_star, c, d, Phi0;
};
SpaRandModerate solve_spa_rand_moderate(const ProblemInstance& inst, const Tolerance& tol = {});

// Closed-form minimax lambda-regret of a class; no curves are built.
double minimax_value(MechanismClass cls, const ProblemInstance& inst, const Tolerance& tol = {});

SaddleSolution optimal_all(const ProblemInstance& inst, const Tolerance& tol = {});
SaddleSolution optimal_std(const ProblemInstance& inst, const Tolerance& tol = {});
SaddleSolution optimal_spa_rand(const ProblemInstance& inst, const Tolerance& tol = {});
SaddleSolution optimal_spa_no_reserve(const ProblemInstance& inst, const Tolerance& tol = {});
SaddleSolution optimal_spa_det_solution(const ProblemInstance& inst, const Tolerance& tol = {});
SaddleSolution solve_class(MechanismClass cls, const ProblemInstance& inst, const Tolerance& tol = {});

double worst_regret_spa_fixed(const ProblemInstance& inst, double r);

struct SpaDet {
    double r_star;
    double value;
};
SpaDet optimal_spa_det(const ProblemInstance& inst);

// Nature's near-optimal reply to SPA(r): atom just below r and at b.
PiecewiseCdf spa_fixed_worst_case(const ProblemInstance& inst, double r);

}  // namespace rauc
