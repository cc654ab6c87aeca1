#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domain.hpp"

namespace rauc {

struct RatioResult {
    double lambda_star = 0;
    Regime regime = Regime::Low;
    double residual = 0;  // minimax lambda*-regret at b = 1
};

// Largest lambda with nonpositive minimax lambda-regret on [k, 1].
RatioResult maximin_ratio(MechanismClass cls, int n, double k, double tol = 1e-10, const Tolerance& qt = {});

Regime classify_regime(MechanismClass cls, int n, double k, double lambda, const Tolerance& qt = {});

struct NeverPureSpaReport {
    bool pass = true;
    std::size_t checked = 0;
    double min_margin = 0;  // min over cells of k - k_l(lambda*)
    struct Violation {
        int n;
        double k, lambda_star, k_l;
    };
    std::optional<Violation> first_violation;
};

NeverPureSpaReport check_never_pure_spa(const std::vector<int>& n_values, const std::vector<double>& k_grid,
                                        const Tolerance& qt = {});

// Smallest a/b at which the maximin-ratio mechanism for all DSIC mechanisms is pure POOL.
double pure_pool_onset(int n, const Tolerance& qt = {});

// (normalized threshold, Psi) pairs for a pooling-regime solution.
std::vector<std::pair<double, double>> normalized_threshold_cdf(const SaddleSolution& sol, std::size_t grid);

struct RatioTable {
    std::string row_label;  // "n" or "class"
    std::vector<std::string> rows;
    std::vector<double> cols;  // a/b
    std::vector<std::vector<double>> cells;

    std::string to_csv() const;
};

const std::vector<double>& table2_ratios();
const std::vector<double>& table3_ratios();

// Cells are independent; they are spread over worker threads.
RatioTable ratio_table_by_n(const std::vector<int>& n_values, const std::vector<double>& k_values,
                            const Tolerance& qt = {});
RatioTable ratio_table_by_class(int n, const std::vector<MechanismClass>& classes,
                                const std::vector<double>& k_values, const Tolerance& qt = {});

}  // namespace rauc
