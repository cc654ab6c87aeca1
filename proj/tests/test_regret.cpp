#include <doctest.h>

#include <cmath>
#include <random>

#include "mechanisms.hpp"
#include "regret.hpp"
#include "saddle.hpp"

using namespace rauc;

namespace {

PiecewiseCdf iso_cdf(double a, double b, double c) {
    Segment s;
    s.lo = a;
    s.hi = b;
    s.form = Form::IsoRevenue;
    s.p[0] = c;
    return PiecewiseCdf(a, b, {s});
}

GuGdMechanism spa_with(const PiecewiseCdf& phi, const ProblemInstance& in) {
    Curve none(in.b, in.b, {constant_segment(in.b, in.b, 0.0)});
    return mixture_to_gugd(phi.curve(), none, 0.0, in);
}

}  // namespace

TEST_SUITE("regret") {

TEST_CASE("quadrature: trivial and two-point cases") {
    ProblemInstance in{0.2, 1.0, 2, 1.0};
    auto spa = spa_fixed(in.a, in);
    CHECK(std::abs(lambda_regret_quadrature(spa, point_mass(in.a, in.b, in.b), in)) < 1e-12);
    CHECK(lambda_regret_quadrature(spa, two_point(in.a, in.b, 0.5), in) == doctest::Approx(0.4).epsilon(1e-10));
    ProblemInstance in3{0.5, 3.0, 2, 1.0};
    CHECK(lambda_regret_quadrature(spa_fixed(0.5, in3), two_point(0.5, 3.0, 0.5), in3) ==
          doctest::Approx(1.25).epsilon(1e-10));
}

TEST_CASE("quadrature at the HIGH saddle equals the closed form") {
    for (int n : {2, 3, 5}) {
        ProblemInstance in{0.5, 1.0, n, 1.0};
        auto sol = optimal_all(in);
        REQUIRE(sol.regime == Regime::High);
        CHECK(std::abs(lambda_regret_quadrature(*sol.mechanism, sol.worst_case, in) - sol.value) < 1e-8);
    }
}

TEST_CASE("Regret-F and Regret-g agree where both apply") {
    // continuous mechanisms against CDFs with atoms only at the ends
    for (int n : {1, 2, 3, 4})
        for (double k : {0.05, 0.25, 0.6}) {
            ProblemInstance in{k, 1.0, n, 0.9};
            auto sol = optimal_all(in);
            for (double c : {0.0, 0.5 * k, k}) {
                auto F = iso_cdf(k, 1.0, c);
                REQUIRE(regret_form_g_applies(F));
                if (!regret_form_F_applies(*sol.mechanism, F)) continue;
                double rf = regret_form_F(*sol.mechanism, F, in), rg = regret_form_g(*sol.mechanism, F, in);
                CHECK(std::abs(rf - rg) <= 2 * Tolerance{}.quad_abs_tol + 1e-12);
            }
        }
}

TEST_CASE("representation mismatch") {
    // a jump in g where F has an interior atom fits neither form
    ProblemInstance in{0.0, 1.0, 2, 1.0};
    auto spa = spa_fixed(0.5, in);
    auto F = point_mass(0.0, 1.0, 0.5);
    if (!regret_form_F_applies(spa, F) && !regret_form_g_applies(F))
        CHECK_THROWS_AS(lambda_regret_quadrature(spa, F, in), RepresentationMismatch);
    else
        CHECK(std::isfinite(lambda_regret_quadrature(spa, F, in)));
}

TEST_CASE("Monte Carlo: point mass is exact") {
    ProblemInstance in{0.2, 1.0, 3, 1.0};
    auto est = monte_carlo_regret(spa_fixed(in.a, in), point_mass(in.a, in.b, in.b), in, 1000, 7);
    CHECK(std::abs(est.estimate) < 1e-15);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("Monte Carlo against quadrature on random pairs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0, 1);
    int worst_z = 0;
    for (int t = 0; t < 20; ++t) {
        int n = 1 + t % 4;
        double a = 0.6 * U(rng), b = 1.0 + U(rng);
        ProblemInstance in{a, b, n, 0.5 + 0.5 * U(rng)};
        GuGdMechanism m;
        switch (t % 3) {
            case 0: m = spa_fixed(a + (b - a) * U(rng), in); break;
            case 1: m = pool_fixed(a + (b - a) * U(rng), in); break;
            default: m = *optimal_all(in).mechanism; break;
        }
        PiecewiseCdf F = t % 2 ? two_point(a, b, U(rng)) : iso_cdf(a, b, a * U(rng));
        double q = lambda_regret_quadrature(m, F, in);
        auto mc = monte_carlo_regret(m, F, in, 1000000, 100 + t);
        // at a saddle Nature is indifferent and every draw can give the same regret
        double z = std::abs(mc.estimate - q) / std::max(mc.std_error, 1e-12 * b);
        CHECK_MESSAGE(z < 3.0, "t=" << t << " n=" << n << " a=" << a << " b=" << b << " lam=" << in.lambda << " form=" << m.form << " vs=" << m.v_star << " q=" << q << " mc=" << mc.estimate);
        worst_z = std::max(worst_z, int(z));
    }
    CHECK(worst_z < 3);
}

TEST_CASE("Monte Carlo is independent of the thread count") {
    ProblemInstance in{0.25, 1.0, 3, 1.0};
    auto sol = optimal_all(in);
    auto one = monte_carlo_regret(*sol.mechanism, sol.worst_case, in, 300000, 5, 1);
    auto four = monte_carlo_regret(*sol.mechanism, sol.worst_case, in, 300000, 5, 4);
    CHECK(one.estimate == four.estimate);
    CHECK(one.std_error == four.std_error);
    auto other = monte_carlo_regret(*sol.mechanism, sol.worst_case, in, 300000, 6, 4);
    CHECK(other.estimate != one.estimate);
}

TEST_CASE("GenSPA regret") {
    ProblemInstance in{0.5, 1.0, 3, 1.0};
    auto sol = optimal_std(in);
    REQUIRE(sol.genspa_phi);
    const auto& phi = *sol.genspa_phi;
    SUBCASE("F(a) = 0 reduces to SPA with the same reserve CDF") {
        auto F = iso_cdf(in.a, in.b, in.a);
        CHECK(std::abs(lambda_regret_genspa(phi, F, in) - lambda_regret_quadrature(spa_with(phi, in), F, in)) < 1e-10);
    }
    SUBCASE("saddle value") {
        CHECK(std::abs(lambda_regret_genspa(phi, sol.worst_case, in) - sol.value) < 1e-8);
    }
    SUBCASE("point mass at a") {
        ProblemInstance l{0.5, 1.0, 3, 0.8};
        auto s = optimal_std(l);
        CHECK(lambda_regret_genspa(*s.genspa_phi, point_mass(0.5, 1.0, 0.5), l) == doctest::Approx(-0.1));
        auto o = genspa_allocate_and_pay(*s.genspa_phi, {0.5, 0.5, 0.5}, l);
        CHECK(l.lambda * 0.5 - o.revenue() == doctest::Approx(-0.1));
    }
    SUBCASE("Monte Carlo at the constructed pair") {
        auto mc = monte_carlo_regret_genspa(phi, sol.worst_case, in, 1000000, 3);
        CHECK(std::abs(mc.estimate - lambda_regret_genspa(phi, sol.worst_case, in)) < 3 * mc.std_error);
    }
}

TEST_CASE("Nature best response") {
    SUBCASE("HIGH regime recovers the iso-virtual-value worst case") {
        ProblemInstance in{0.5, 1.0, 2, 1.0};
        auto sol = optimal_all(in);
        auto br = nature_best_response(*sol.mechanism, in, 2001);
        CHECK(br.isotonic);
        double worst = 0;
        for (int i = 1; i < 2000; ++i) {
            double v = 0.5 + 0.5 * i / 2000.0;
            worst = std::max(worst, std::abs(br.F_hat(v) - sol.worst_case(v)));
        }
        CHECK(worst < 2e-3);
    }
    SUBCASE("SPA(a) against two bidders") {
        ProblemInstance in{0.0, 1.0, 2, 1.0};
        auto br = nature_best_response(spa_fixed(0.0, in), in, 2001);
        for (double v : {0.1, 0.3, 0.5, 0.9}) CHECK(br.F_hat(v) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(br.regret == doctest::Approx(0.5).epsilon(1e-3));
    }
    SUBCASE("LOW regime stays below the value") {
        ProblemInstance in{0.1, 1.0, 2, 1.0};
        auto sol = optimal_all(in);
        REQUIRE(sol.regime == Regime::Low);
        auto br = nature_best_response(*sol.mechanism, in, 2001);
        CHECK(br.regret <= sol.value + 1e-6);
        CHECK(br.regret >= sol.value - 10.0 / 2001);
    }
}

TEST_CASE("FOC and SOC") {
    for (double k : {0.1, 0.25, 0.5}) {
        ProblemInstance in{k, 1.0, 2, 1.0};
        auto sol = optimal_all(in);
        auto rep = check_foc_soc(*sol.mechanism, sol.worst_case, in);
        CHECK_MESSAGE(rep.pass, "k=" << k << " foc=" << rep.foc_max_residual << " soc=" << rep.soc_min);
    }
    ProblemInstance hi{0.5, 1.0, 2, 1.0};
    auto sol = optimal_all(hi);
    CHECK_FALSE(check_foc_soc(spa_fixed(hi.a, hi), sol.worst_case, hi).pass);
    ProblemInstance one{0.2, 1.0, 1, 1.0};
    auto s1 = optimal_all(one);
    auto r1 = check_foc_soc(*s1.mechanism, s1.worst_case, one);
    CHECK(r1.pass);
    CHECK(r1.soc_min > -1e-12);
}

TEST_CASE("saddle verification") {
    VerifyOptions opt;
    opt.value_tol = 1e-6;
    opt.seller_tol = 1e-6;
    auto all = verify_saddle(MechanismClass::All, {0.5, 1.0, 2, 1.0}, opt);
    CHECK(all.pass);
    CHECK(all.quad_gap < 1e-6);
    CHECK(all.nature_slack <= opt.nature_c / opt.grid);
    CHECK(all.seller_min_gap >= -1e-6);
    auto rnd = verify_saddle(MechanismClass::SpaRand, {0.4, 1.0, 2, 1.0}, opt);
    CHECK(rnd.regime == Regime::Moderate);
    CHECK(rnd.nature_slack <= opt.nature_c / opt.grid);
    auto one = verify_saddle(MechanismClass::All, {0.1, 1.0, 1, 1.0}, opt);
    CHECK(one.pass);
    CHECK(one.value == doctest::Approx(std::exp(-1.0)));
    auto j = all.to_json();
    for (auto key : {"value", "quad_gap", "nature_slack", "seller_min_gap", "foc_max_residual", "soc_min", "pass"})
        CHECK(j.contains(key));
}

TEST_CASE("quadrature at constructed saddles across the sweep") {
    for (auto cls : {MechanismClass::All, MechanismClass::SpaRand, MechanismClass::SpaDet})
        for (int n : {1, 2, 3, 4, 8})
            for (double k : {0.05, 0.25, 0.5, 0.75, 0.95}) {
                ProblemInstance in{k, 1.0, n, 1.0};
                auto sol = solve_class(cls, in);
                REQUIRE(sol.mechanism);
                double q = lambda_regret_quadrature(*sol.mechanism, sol.worst_case, in);
                CHECK_MESSAGE(std::abs(q - sol.value) < 1e-8, to_string(cls) << " n=" << n << " k=" << k);
            }
}

}
