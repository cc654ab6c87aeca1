#pragma once

#include <cstddef>

#include "domain.hpp"

namespace rauc {

struct PricingGameResult {
    double value = 0;  // midpoint of the bounds
    double lower = 0;  // seller best response to Nature's average
    double upper = 0;  // Nature best response to the seller's average
    double gap = 0;
    std::size_t iterations = 0;
};

// Finite posted-price game: seller mixes over prices, Nature over values,
// payoff lambda*v - p*[v >= p]. Regret matching+ with alternating updates and
// linearly weighted averages.
PricingGameResult pricing_game_value(double a, double b, double lambda, std::size_t price_grid,
                                     std::size_t value_grid, std::size_t iters);

// Exact expectation over grid^n profiles, F pushed onto the right grid point.
double empirical_mechanism_regret(const GuGdMechanism& mech, const PiecewiseCdf& F, const ProblemInstance& inst,
                                  std::size_t grid);

}  // namespace rauc
