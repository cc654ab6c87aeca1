#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "domain.hpp"
#include "mechanisms.hpp"
#include "saddle.hpp"

using namespace rauc;

TEST_SUITE("domain") {

TEST_CASE("instance validation") {
    CHECK_NOTHROW(ProblemInstance({0, 1, 1, 1}).validate());
    CHECK_THROWS_AS(ProblemInstance({1, 1, 2, 1}).validate(), DomainError);
    CHECK_THROWS_AS(ProblemInstance({-1, 1, 2, 1}).validate(), DomainError);
    CHECK_THROWS_AS(ProblemInstance({0, 1, 0, 1}).validate(), DomainError);
    CHECK_THROWS_AS(ProblemInstance({0, 1, 2, 0}).validate(), DomainError);
    CHECK_THROWS_AS(ProblemInstance({0, 1, 2, 1.5}).validate(), DomainError);
    CHECK(ProblemInstance({0.5, 2, 2, 1}).k() == 0.25);
}

TEST_CASE("class names round trip") {
    for (auto c : {MechanismClass::All, MechanismClass::Std, MechanismClass::SpaRand, MechanismClass::SpaDet,
                   MechanismClass::SpaNoReserve})
        CHECK(parse_class(to_string(c)) == c);
    CHECK(parse_class("spa-rand") == MechanismClass::SpaRand);
    CHECK(parse_class("spa-no-reserve") == MechanismClass::SpaNoReserve);
    CHECK_THROWS_AS(parse_class("vcg"), DomainError);
}

TEST_CASE("cdf_eval examples") {
    auto rc = regime_constants(2, 1.0);
    auto sol = optimal_all({0.0, 1.0, 2, 1.0});
    CHECK(std::abs(sol.worst_case.left_limit(1.0) - (1 - rc.k_l)) < 1e-12);
    CHECK(cdf_eval(sol.worst_case, 1.0) == 1.0);
    auto tp = two_point(0.2, 1.0, 0.5);
    CHECK(cdf_eval(tp, 0.6) == 0.5);
    CHECK(cdf_eval(tp, 1.0) == 1.0);
    CHECK(cdf_eval(tp, 0.2) == 0.5);
    CHECK_THROWS_AS(cdf_eval(tp, 1.1), DomainError);
}

TEST_CASE("atoms of constructed CDFs") {
    auto tp = two_point(0.2, 1.0, 0.25);
    auto at = tp.atoms();
    REQUIRE(at.size() == 2);
    CHECK(at[0].first == 0.2);
    CHECK(at[0].second == doctest::Approx(0.25));
    CHECK(at[1].first == 1.0);
    CHECK(at[1].second == doctest::Approx(0.75));
    double total = 0;
    for (auto [x, m] : optimal_all({0.25, 1, 2, 1}).worst_case.atoms()) total += m;
    CHECK(total <= 1 + 1e-12);
}

TEST_CASE("sampling") {
    auto pm = point_mass(0.0, 2.0, 2.0);
    auto s = cdf_sample(pm, 3, 5);
    CHECK(std::all_of(s.begin(), s.end(), [](double v) { return v == 2.0; }));
    auto tp = two_point(0.0, 1.0, 0.5);
    auto t = cdf_sample(tp, 9, 200000);
    double frac = std::count(t.begin(), t.end(), 0.0) / 200000.0;
    CHECK(std::abs(frac - 0.5) < 0.005);
    CHECK(cdf_sample(tp, 9, 10) == cdf_sample(tp, 9, 10));
}

TEST_CASE("iso-revenue sample passes a KS check") {
    auto F = optimal_all({0.0, 1.0, 2, 1.0}).worst_case;
    auto s = cdf_sample(F, 42, 1000000);
    std::sort(s.begin(), s.end());
    double ks = 0;
    const double m = static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i + 1 < s.size() && s[i + 1] == s[i]) continue;  // only at the top of a run
        double Fv = F(s[i]), Fl = F.left_limit(s[i]);
        std::size_t lo = std::lower_bound(s.begin(), s.end(), s[i]) - s.begin();
        ks = std::max({ks, std::abs((i + 1) / m - Fv), std::abs(lo / m - Fl)});
    }
    CHECK(ks < 0.005);
}

TEST_CASE("CDF invariants for every constructed worst case") {
    for (auto cls : {MechanismClass::All, MechanismClass::Std, MechanismClass::SpaRand, MechanismClass::SpaDet,
                     MechanismClass::SpaNoReserve})
        for (int n : {1, 2, 3, 8})
            for (double k : {0.0, 0.05, 0.25, 0.5, 0.9}) {
                auto sol = solve_class(cls, {k, 1.0, n, 1.0});
                CHECK_NOTHROW(sol.worst_case.validate(10000));
                if (sol.mechanism) CHECK_NOTHROW(sol.mechanism->validate(10000, 1e-10));
                if (sol.genspa_phi) CHECK_NOTHROW(sol.genspa_phi->validate(10000));
            }
}

TEST_CASE("JSON round trip") {
    auto sol = optimal_all({0.25, 1, 2, 1});
    auto j = sol.worst_case.to_json();
    CHECK(j.contains("atoms"));
    CHECK(j.contains("segments"));
    auto F2 = PiecewiseCdf::from_json(j);
    for (double v : {0.25, 0.3, 0.5, 0.9, 1.0}) CHECK(F2(v) == doctest::Approx(sol.worst_case(v)).epsilon(1e-15));
    auto inst = instance_from_json(to_json(sol.instance));
    CHECK(inst.a == 0.25);
    CHECK(inst.n == 2);
    auto mj = sol.mechanism->to_json();
    CHECK(mj.contains("v_star"));
    CHECK(mj.contains("alpha"));
    auto sj = sol.to_json();
    CHECK(sj["regime"] == "MODERATE");
}

TEST_CASE("curve integral against quadrature") {
    auto sol = optimal_all({0.25, 1, 3, 1});
    const auto& g = sol.mechanism->g_u;
    double q = integrate([&](double v) { return g(v); }, 0.3, 0.95);
    CHECK(std::abs(g.integral(0.3, 0.95) - q) < 1e-10);
}

}
