#include <doctest.h>

#include <cmath>

#include "mechanisms.hpp"
#include "oracle.hpp"
#include "regret.hpp"
#include "saddle.hpp"

using namespace rauc;

TEST_SUITE("oracle") {

TEST_CASE("pricing game against the one-buyer value") {
    auto lo = pricing_game_value(0.0, 1.0, 1.0, 400, 400, 200000);
    CHECK(std::abs(lo.value - std::exp(-1.0)) < 0.01);
    CHECK(lo.gap < 0.005);
    CHECK(lo.lower <= lo.upper + 1e-12);
    auto hi = pricing_game_value(0.5, 1.0, 1.0, 400, 400, 200000);
    CHECK(std::abs(hi.value - 0.5 * std::log(2.0)) < 0.01);
}

TEST_CASE("pricing game on a single point") {
    auto r = pricing_game_value(0.0, 1.0, 1.0, 1, 1, 10);
    CHECK(r.value == 0.0);
    CHECK(r.gap == 0.0);
}

TEST_CASE("pricing gap shrinks with iterations") {
    auto a = pricing_game_value(0.0, 1.0, 1.0, 100, 100, 2000);
    auto b = pricing_game_value(0.0, 1.0, 1.0, 100, 100, 50000);
    CHECK(b.gap <= a.gap);
}

TEST_CASE("enumeration matches hand counts") {
    ProblemInstance in{0.2, 1.0, 2, 1.0};
    auto spa = spa_fixed(0.2, in);
    auto F = two_point(0.2, 1.0, 0.5);
    double e = empirical_mechanism_regret(spa, F, in, 2);
    CHECK(e == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(e == doctest::Approx(lambda_regret_quadrature(spa, F, in)).epsilon(1e-12));

    ProblemInstance one{0.1, 1.0, 1, 0.9};
    auto m = *optimal_all(one).mechanism;
    auto pm = point_mass(0.1, 1.0, 1.0);
    CHECK(empirical_mechanism_regret(m, pm, one, 11) ==
          doctest::Approx(lambda_regret_quadrature(m, pm, one)).epsilon(1e-12));

    // both values under the pooling threshold: the item goes at price a
    auto pool = pool_fixed(0.8, in);
    auto out = allocate_and_pay(pool, {0.3, 0.5}, in);
    CHECK(out.revenue() == doctest::Approx(0.2));
}

TEST_CASE("enumeration size limit") {
    ProblemInstance in{0.0, 1.0, 4, 1.0};
    auto spa = spa_fixed(0.0, in);
    auto F = two_point(0.0, 1.0, 0.5);
    CHECK_NOTHROW(empirical_mechanism_regret(spa, F, {0.0, 1.0, 2, 1.0}, 40));
    CHECK_THROWS_AS(empirical_mechanism_regret(spa, F, in, 200), DomainError);
}

TEST_CASE("enumeration converges to quadrature") {
    // thresholds on the coarsest grid so only the discretized F moves
    ProblemInstance in{0.0, 1.0, 2, 1.0};
    auto m = spa_fixed(0.4, in);
    PiecewiseCdf F(0.0, 1.0, {constant_segment(0.0, 0.2, 0.0), [] {
                                  Segment t;
                                  t.lo = 0.2;
                                  t.hi = 1.0;
                                  t.form = Form::ConstVirtualValue;
                                  t.p[0] = 0.2;
                                  t.p[1] = 0.0;
                                  return t;
                              }()});
    double q = lambda_regret_quadrature(m, F, in);
    double d1 = std::abs(empirical_mechanism_regret(m, F, in, 101) - q);
    double d2 = std::abs(empirical_mechanism_regret(m, F, in, 201) - q);
    double d3 = std::abs(empirical_mechanism_regret(m, F, in, 401) - q);
    CHECK(d1 * 100 <= 1.0);
    CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(0.3));
    CHECK(d3 / d2 == doctest::Approx(0.5).epsilon(0.3));
}

}
