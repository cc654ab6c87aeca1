#include <doctest.h>

#include <cmath>

#include "ratio.hpp"
#include "saddle.hpp"

using namespace rauc;

TEST_SUITE("ratio") {

TEST_CASE("reference cells") {
    CHECK(std::abs(maximin_ratio(MechanismClass::All, 2, 0.5).lambda_star - 0.7463) < 5e-5);
    CHECK(std::abs(maximin_ratio(MechanismClass::All, 1, 0.5).lambda_star - 0.5906) < 5e-5);
    CHECK(std::abs(maximin_ratio(MechanismClass::Std, 4, 0.25).lambda_star - 0.5684) < 5e-5);
    CHECK(std::abs(maximin_ratio(MechanismClass::SpaRand, 4, 0.25).lambda_star - 0.5517) < 5e-5);
    CHECK(std::abs(maximin_ratio(MechanismClass::SpaNoReserve, 4, 0.25).lambda_star - 0.5457) < 5e-5);
}

TEST_CASE("one bidder closed form") {
    for (double k : {1e-4, 0.01, 0.2, 0.5, 0.9}) {
        double want = 1 / (1 + std::log(1 / k));
        CHECK(maximin_ratio(MechanismClass::All, 1, k).lambda_star == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("root quality") {
    for (auto cls : {MechanismClass::All, MechanismClass::Std, MechanismClass::SpaRand, MechanismClass::SpaDet})
        for (int n : {1, 2, 4})
            for (double k : {0.05, 0.3, 0.8}) {
                auto r = maximin_ratio(cls, n, k);
                CHECK(std::abs(r.residual) <= 1e-10);
                CHECK(std::abs(minimax_value(cls, {k, 1.0, n, r.lambda_star})) <= 1e-10);
            }
}

TEST_CASE("monotone in k and n") {
    const std::vector<double> ks{0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.99};
    for (auto cls : {MechanismClass::All, MechanismClass::SpaRand}) {
        for (int n : {1, 2, 3, 5}) {
            double prev = 0;
            for (double k : ks) {
                double l = maximin_ratio(cls, n, k).lambda_star;
                CHECK(l >= prev - 1e-9);
                prev = l;
            }
        }
        for (double k : ks) {
            double prev = 0;
            for (int n : {1, 2, 3, 5, 10}) {
                double l = maximin_ratio(cls, n, k).lambda_star;
                CHECK(l >= prev - 1e-9);
                prev = l;
            }
        }
    }
}

TEST_CASE("class nesting with strict gaps") {
    auto r = [](MechanismClass c) { return maximin_ratio(c, 4, 0.25).lambda_star; };
    double all = r(MechanismClass::All), std_ = r(MechanismClass::Std), rnd = r(MechanismClass::SpaRand),
           det = r(MechanismClass::SpaDet), none = r(MechanismClass::SpaNoReserve);
    CHECK(all - std_ > 1e-3);
    CHECK(std_ - rnd > 1e-3);
    CHECK(rnd - none > 1e-3);
    CHECK(std::abs(det - none) < 1e-9);
}

TEST_CASE("regime classification") {
    CHECK(maximin_ratio(MechanismClass::All, 2, 1e-4).regime == Regime::Moderate);
    CHECK(classify_regime(MechanismClass::All, 2, 0.1, 1.0) == Regime::Low);
    CHECK(maximin_ratio(MechanismClass::All, 2, 0.5).regime == Regime::High);
    CHECK(maximin_ratio(MechanismClass::SpaNoReserve, 3, 0.1).regime == Regime::High);
    CHECK(classify_regime(MechanismClass::All, 2, 0.25, 1.0) == Regime::Moderate);
    CHECK(classify_regime(MechanismClass::Std, 1, 0.5, 1.0) == Regime::Moderate);
}

TEST_CASE("never pure SPA") {
    std::vector<int> ns{2, 3, 4, 5, 6, 7, 8};
    std::vector<double> ks{0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.99};
    auto rep = check_never_pure_spa(ns, ks);
    CHECK(rep.pass);
    CHECK(rep.checked == ns.size() * ks.size());
    CHECK(rep.min_margin >= -1e-9);
    CHECK_FALSE(rep.first_violation);
}

TEST_CASE("pure POOL onset") {
    CHECK(std::abs(pure_pool_onset(2) - 0.0978) < 5e-5);
    CHECK(std::abs(pure_pool_onset(4) - 0.0035) < 5e-5);
    double k2 = pure_pool_onset(2);
    CHECK(maximin_ratio(MechanismClass::All, 2, k2 * 1.01).regime == Regime::High);
    CHECK(maximin_ratio(MechanismClass::All, 2, k2 * 0.99).regime == Regime::Moderate);
}

TEST_CASE("normalized threshold CDF") {
    auto at = [](double k) {
        double l = maximin_ratio(MechanismClass::All, 2, k).lambda_star;
        return normalized_threshold_cdf(optimal_all({k, 1.0, 2, l}), 101);
    };
    auto lo = at(0.10), hi = at(0.75);
    REQUIRE(lo.size() == 101);
    CHECK(lo.front().first == 0.0);
    CHECK(lo.front().second == doctest::Approx(0.0));
    CHECK(lo.back().first == 1.0);
    CHECK(lo.back().second == doctest::Approx(1.0));
    for (std::size_t i = 1; i < lo.size(); ++i) {
        CHECK(lo[i].second >= lo[i - 1].second - 1e-14);
        CHECK(lo[i].second >= hi[i].second - 1e-12);
    }
    CHECK_THROWS(normalized_threshold_cdf(optimal_all({0.25, 1.0, 2, 1.0}), 11));
}

TEST_CASE("table CSV") {
    auto t = ratio_table_by_n({1, 2}, {0.5});
    auto csv = t.to_csv();
    CHECK(csv.rfind("n,a_over_b,ratio,ratio_4dp\n", 0) == 0);
    CHECK(csv.find("2,0.5,") != std::string::npos);
    CHECK(csv.find(",0.7463\n") != std::string::npos);
    CHECK(csv == ratio_table_by_n({1, 2}, {0.5}).to_csv());
}

}
