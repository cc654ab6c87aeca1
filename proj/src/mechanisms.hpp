#pragma once

#include <string>
#include <vector>

#include "domain.hpp"

namespace rauc {

GuGdMechanism spa_fixed(double r, const ProblemInstance& inst);
GuGdMechanism pool_fixed(double tau, const ProblemInstance& inst);

// phi lives on [a, v*] with phi(v*) = 1 - n*alpha; psi lives on [v*, b] with psi(b) = n*alpha.
GuGdMechanism mixture_to_gugd(const Curve& phi, const Curve& psi, double alpha, const ProblemInstance& inst,
                              std::string form = "mixture", json params = json::object());

struct Mixture {
    Curve phi, psi;
    double alpha = 0;
    double v_star = 0;
};
Mixture gugd_to_mixture(const GuGdMechanism& mech);

AuctionOutcome allocate_and_pay(const GuGdMechanism& mech, const std::vector<double>& valuations,
                                const ProblemInstance& inst);

AuctionOutcome genspa_allocate_and_pay(const PiecewiseCdf& phi, const std::vector<double>& valuations,
                                       const ProblemInstance& inst);

// Reserve CDF of a deterministic reserve r, usable as a GenSPA argument.
PiecewiseCdf step_cdf(double a, double b, double r);

}  // namespace rauc
