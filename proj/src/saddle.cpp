#include "saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mechanisms.hpp"

namespace rauc {

namespace {

// (1 - k/t)^n integrated over [k, 1]
double int_pow_iso(int n, double k, const Tolerance& tol) {
    if (k >= 1) return 0.0;
    return integrate([n, k](double t) { return std::pow(1 - k / t, n); }, k, 1.0, tol);
}

// Solve g(x) = 0 for x = 1 - k in (0, 1); g is increasing in x.  Returns k.
template <class G>
double solve_threshold(G g, const Tolerance& tol) {
    constexpr double tiny = 1e-300;
    double x_hi = 1 - tiny;
    if (g(x_hi, tiny) <= 0) return 0.0;  // k underflows
    double x_lo = 1e-12;
    if (g(x_lo, 1 - x_lo) >= 0) return 1 - x_lo;
    // solve in k so the om argument stays exact; the residual is steep for large n,
    // so go to a few ulps rather than the caller's width
    Tolerance t = tol;
    t.root_abs_tol = std::min(tol.root_abs_tol, 4 * std::numeric_limits<double>::epsilon());
    double k = find_root([&](double kk) { return g(1 - kk, kk); }, tiny, 1 - x_lo, t);
    return k;
}

Curve empty_curve(double at) { return Curve(at, at, {constant_segment(at, at, 0.0)}); }

Segment form_segment(double lo, double hi, Form f, std::initializer_list<double> p, double offset = 0,
                     double scale = 1) {
    Segment s;
    s.lo = lo;
    s.hi = hi;
    s.form = f;
    std::size_t i = 0;
    for (double x : p) s.p[i++] = x;
    s.offset = offset;
    s.scale = scale;
    return s;
}

PiecewiseCdf iso_worst_case(double a, double b, double r, double c, const Tolerance& tol) {
    // F = mass F(a) flat to r, then 1 - c/v on [r, b), atom at b
    std::vector<Segment> segs;
    if (r > a) segs.push_back(constant_segment(a, r, std::max(0.0, 1 - c / r)));
    segs.push_back(form_segment(r, b, Form::IsoRevenue, {c}));
    return PiecewiseCdf(a, b, segs, tol);
}

double pow_or_one(double base, int e) { return e == 0 ? 1.0 : std::pow(base, e); }

}  // namespace

double k_l_residual(int n, double lambda, double k, const Tolerance& tol) {
    double x = 1 - k;
    return lambda * iso_integral(n, 0.0, k, 1.0, tol) - pow_or_one(x, n - 1);
}

double k_h_residual(int n, double lambda, double k, const Tolerance& tol) {
    double x = 1 - k;
    return iso_integral_mixed(n, 0.0, k, 1.0, lambda, tol) - std::pow(x, n);
}

RegimeConstants regime_constants(int n, double lambda, const Tolerance& tol) {
    if (n < 1) throw DomainError("regime_constants: n >= 1");
    if (!(lambda > 0 && lambda <= 1)) throw DomainError("regime_constants: lambda in (0,1]");
    RegimeConstants rc;
    if (n == 1) {
        rc.k_l = std::exp(-1.0 / lambda);
        rc.k_h = 1.0;
        rc.k_h_prime = 1.0;
        return rc;
    }
    rc.k_l = solve_threshold(
        [&](double x, double om) { return lambda * x * log_tail_scaled(n, x, om, tol) - 1; }, tol);
    rc.k_h = solve_threshold(
        [&](double x, double om) { return 1.0 / n + lambda * x * log_tail_scaled(n + 1, x, om, tol) - 1; },
        tol);
    rc.k_h_prime = lambda * n / ((1 + lambda) * n - 1);
    return rc;
}

ModerateRoot solve_moderate(const ProblemInstance& inst, const Tolerance& tol) {
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda;
    ModerateRoot out;
    if (n == 1) {
        out.v_star = b;
        out.alpha = 1 - lam * std::log(b / a);
        return out;
    }
    const double xb = (b - a) / b;
    auto S = [&](int s, double x, double om) { return log_tail(s, x, om, tol); };
    auto M = [&](double x, double om) { return std::pow(x, n) / n + lam * S(n + 1, x, om); };
    const double Mb = M(xb, a / b);
    auto fn = [&](double v) {
        double x = (v - a) / v, om = a / v;
        return std::pow(x, n) + (n - 1) * lam * x * S(n, x, om) + n * (Mb - M(x, om)) - n * std::pow(xb, n);
    };
    double flo = fn(a), fhi = fn(b);
    double vs;
    if (flo <= 0) vs = a;
    else if (fhi >= 0) vs = b;
    else vs = find_root(fn, a, b, tol);
    double x = (vs - a) / vs;
    double alpha = x == 0 ? 1.0 / n : (1 - lam * x * log_tail_scaled(n, x, a / vs, tol)) / n;
    alpha = std::clamp(alpha, 0.0, 1.0 / n);
    out.v_star = vs;
    out.alpha = alpha;
    out.residual_1 = std::pow(x, n - 1) * (1 - n * alpha) - lam * iso_integral(n, 0.0, a, vs, tol);
    out.residual_2 = std::pow(xb, n) - std::pow(x, n) * (1 - (n - 1) * alpha) -
                     (iso_integral_mixed(n, 0.0, a, b, lam, tol) - iso_integral_mixed(n, 0.0, a, vs, lam, tol));
    return out;
}

namespace {

double genspa_phi_at(double v, double a, double c, int n, double lam, const Tolerance& tol) {
    Segment s = form_segment(a, v, Form::GenSpaPhi, {a, c, static_cast<double>(n), lam});
    return s.value(v, tol);
}

}  // namespace

double genspa_constant(const ProblemInstance& inst, const Tolerance& tol) {
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda;
    if (n < 2) throw DomainError("GenSPA needs n >= 2");
    double c_lo = lam * a / (n - 1 + lam);  // atom at a equals 1 there
    auto g = [&](double c) { return genspa_phi_at(b, a, c, n, lam, tol) - 1; };
    if (g(a) >= 0) return a;
    return find_root(g, c_lo, a, tol);
}

SpaRandModerate solve_spa_rand_moderate(const ProblemInstance& inst, const Tolerance& tol) {
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda;
    auto pieces = [&](double F0) {
        double c = (n - (n - 1) * F0) * a / n;
        double d = std::pow(F0, n) / ((n - 1) * (1 - F0)) + std::log1p(-F0);
        for (int k = 1; k < n; ++k) d += std::pow(F0, k) / k;
        return std::pair<double, double>{c, d};
    };
    auto fn = [&](double F0) {
        auto [c, d] = pieces(F0);
        double m = 1 - c / b;
        double sum = 0;
        for (int k = 1; k < n; ++k) sum += std::pow(m, k) / k;
        return lam * (d + std::log(b / c) - sum) - std::pow(m, n - 1);
    };
    double hi = (n - 1.0) / (n - 1 + lam);
    double F0;
    if (fn(0) >= 0) F0 = 0;
    else if (fn(hi) <= 0) F0 = hi;
    else F0 = find_root(fn, 0.0, hi, tol);
    auto [c, d] = pieces(F0);
    SpaRandModerate s;
    s.F0 = F0;
    s.c = c;
    s.d = d;
    s.r_star = (n - (n - 1) * F0) / (n * (1 - F0)) * a;
    s.Phi0 = lam * F0 / ((n - 1) * (1 - F0));
    return s;
}

double worst_regret_spa_fixed(const ProblemInstance& inst, double r) {
    inst.validate();
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda;
    if (!(r >= a && r <= b)) throw DomainError("worst_regret_spa_fixed: r outside [a,b]");
    if (n == 1) {
        if (r == a) return lam * b - a;
        return r <= lam * b / (1 + lam) ? lam * b - r : lam * r;
    }
    if (r == a) return -(1 - lam) * b + (b - a) * std::pow((n - 1) / (n - 1 + lam), n - 1);
    if (r <= lam * b / (1 + lam)) {
        double den = (n - 1 + lam) * (b - r) - r;
        return -(1 - lam) * b + std::pow(b - r, n) * std::pow(n - 1.0, n - 1) / std::pow(den, n - 1);
    }
    return lam * r;
}

SpaDet optimal_spa_det(const ProblemInstance& inst) {
    inst.validate();
    const int n = inst.n;
    const double b = inst.b, lam = inst.lambda, k = inst.k();
    double thr;
    if (n == 1) thr = lam / (1 + lam);
    else thr = 1 - std::pow(n / (n + lam), n) * std::pow((n - 1 + lam) / (n - 1), n - 1);
    double r_res = lam * b / (n + lam);
    if (k <= thr && r_res >= inst.a) {
        double value = std::pow(n / (n + lam), n) * b - (1 - lam) * b;
        return {r_res, value};
    }
    return {inst.a, worst_regret_spa_fixed(inst, inst.a)};
}

PiecewiseCdf spa_fixed_worst_case(const ProblemInstance& inst, double r) {
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda;
    const double delta = 1e-10 * b;
    auto just_below = [&](double mass) {
        double loc = r - delta;
        if (loc <= a) return PiecewiseCdf(a, b, {constant_segment(a, b, mass)});
        return PiecewiseCdf(a, b, {constant_segment(a, loc, 0.0), constant_segment(loc, b, mass)});
    };
    if (n == 1) {
        if (r == a || r <= lam * b / (1 + lam)) return point_mass(a, b, b);
        return just_below(1.0);
    }
    if (r == a) return two_point(a, b, (n - 1) / (n - 1 + lam));
    if (r <= lam * b / (1 + lam)) {
        double cs = (n - 1) * (b - r) / ((n - 1 + lam) * (b - r) - r);
        return just_below(std::min(cs, 1.0));
    }
    return just_below(1.0);
}

// ------------------------------------------------------------ values

namespace {

double value_all(const ProblemInstance& inst, const RegimeConstants& rc, const Tolerance& tol) {
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda, k = inst.k();
    if (k <= rc.k_l)
        return -(1 - lam) * b + (std::pow(1 - rc.k_l, n) - lam * int_pow_iso(n, rc.k_l, tol)) * b;
    if (k < rc.k_h) return -(1 - lam) * b + b * std::pow(1 - k, n) - lam * b * int_pow_iso(n, k, tol);
    double kp = rc.k_h / (1 - rc.k_h);
    double I = integrate(
        [&](double t) {
            return std::pow(t, n - 1) * (n * kp * kp - lam * t * (t + kp)) / std::pow(t + kp, n + 1);
        },
        0.0, 1.0, tol);
    return -(1 - lam) * b + (std::pow(1 - rc.k_h, n) + I) * (b - a);
}

double value_genspa(const ProblemInstance& inst, double c, const Tolerance& tol) {
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda;
    double I = integrate([&](double v) { return 1 - std::pow(1 - c / v, n); }, a, b, tol);
    return lam * (a + I) - a * std::pow(1 - c / a, n) - b + b * std::pow(1 - c / b, n);
}

double value_spa_rand_moderate(const ProblemInstance& inst, const SpaRandModerate& s, const Tolerance& tol) {
    const int n = inst.n;
    const double b = inst.b, lam = inst.lambda;
    double I = integrate([&](double v) { return std::pow(1 - s.c / v, n); }, s.r_star, b, tol);
    return -(1 - lam) * b - lam * (s.r_star - inst.a) * std::pow(s.F0, n) + b * std::pow(1 - s.c / b, n) -
           lam * I;
}

}  // namespace

double minimax_value(MechanismClass cls, const ProblemInstance& inst, const Tolerance& tol) {
    inst.validate();
    const int n = inst.n;
    const double k = inst.k();
    if (cls == MechanismClass::SpaDet) return optimal_spa_det(inst).value;
    if (cls == MechanismClass::SpaNoReserve) return worst_regret_spa_fixed(inst, inst.a);
    auto rc = regime_constants(n, inst.lambda, tol);
    if (cls == MechanismClass::All || n == 1 || k <= rc.k_l) return value_all(inst, rc, tol);
    if (cls == MechanismClass::Std) return value_genspa(inst, genspa_constant(inst, tol), tol);
    // SPA_RAND
    if (k >= rc.k_h_prime) return worst_regret_spa_fixed(inst, inst.a);
    return value_spa_rand_moderate(inst, solve_spa_rand_moderate(inst, tol), tol);
}

// ------------------------------------------------------------ saddle pairs

SaddleSolution optimal_all(const ProblemInstance& inst, const Tolerance& tol) {
    inst.validate();
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda, k = inst.k();
    const double dn = n;
    auto rc = regime_constants(n, lam, tol);
    SaddleSolution sol;
    sol.instance = inst;
    sol.cls = MechanismClass::All;
    sol.value = value_all(inst, rc, tol);
    sol.constants["k_l"] = rc.k_l;
    sol.constants["k_h"] = rc.k_h;

    if (k <= rc.k_l) {
        double r = std::max(rc.k_l * b, a);
        std::vector<Segment> phi;
        if (r > a) phi.push_back(constant_segment(a, r, 0.0));
        phi.push_back(form_segment(r, b, Form::PhiLow, {r, dn, lam}));
        sol.regime = Regime::Low;
        sol.mechanism = mixture_to_gugd(Curve(a, b, phi, {}, tol), empty_curve(b), 0.0, inst, "spa_phi",
                                        {{"r_star", r}});
        sol.worst_case = iso_worst_case(a, b, r, r, tol);
        sol.constants["r_star"] = r;
        sol.constants["v_star"] = b;
        sol.constants["alpha"] = 0;
        sol.constants["phi_0"] = 0;
        return sol;
    }
    if (k < rc.k_h) {
        auto mr = solve_moderate(inst, tol);
        const double vs = mr.v_star, al = mr.alpha;
        Curve phi = vs > a ? Curve(a, vs, {form_segment(a, vs, Form::PhiLow, {a, dn, lam})}, {}, tol)
                           : empty_curve(a);
        Curve psi = empty_curve(b);
        if (vs < b) {
            double xb = (b - a) / b;
            double K = std::pow(xb, n) - iso_integral_mixed(n, 0.0, a, b, lam, tol);
            psi = Curve(vs, b,
                        {form_segment(vs, b, Form::PsiHigh, {a, 0.0, dn, lam, K}, dn * al - dn / (n - 1),
                                      dn / (n - 1))},
                        {}, tol);
        }
        sol.regime = Regime::Moderate;
        sol.mechanism = mixture_to_gugd(phi, psi, al, inst, "unified",
                                        {{"v_star", vs}, {"alpha", al}, {"phi_0", 0.0}});
        sol.worst_case = iso_worst_case(a, b, a, a, tol);
        sol.constants["r_star"] = a;
        sol.constants["v_star"] = vs;
        sol.constants["alpha"] = al;
        sol.constants["phi_0"] = 0;
        sol.constants["residual_1"] = mr.residual_1;
        sol.constants["residual_2"] = mr.residual_2;
        return sol;
    }
    const double phi0 = (a - rc.k_h * b) / (1 - rc.k_h);
    Curve psi(a, b,
              {form_segment(a, b, Form::PsiHigh, {a, phi0, dn, lam, 0.0}, -1.0 / (n - 1), dn / (n - 1))}, {},
              tol);
    sol.regime = Regime::High;
    sol.mechanism = mixture_to_gugd(empty_curve(a), psi, 1.0 / n, inst, "pool_psi", {{"phi_0", phi0}});
    sol.worst_case = PiecewiseCdf(a, b, {form_segment(a, b, Form::ConstVirtualValue, {a, phi0})}, tol);
    sol.constants["phi_0"] = phi0;
    sol.constants["v_star"] = a;
    sol.constants["alpha"] = 1.0 / n;
    return sol;
}

SaddleSolution optimal_std(const ProblemInstance& inst, const Tolerance& tol) {
    inst.validate();
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda;
    auto rc = regime_constants(n, lam, tol);
    if (n == 1 || inst.k() <= rc.k_l) {
        auto sol = optimal_all(inst, tol);
        sol.cls = MechanismClass::Std;
        return sol;
    }
    double c = genspa_constant(inst, tol);
    SaddleSolution sol;
    sol.instance = inst;
    sol.cls = MechanismClass::Std;
    sol.regime = Regime::High;
    sol.genspa_phi = PiecewiseCdf(a, b, {form_segment(a, b, Form::GenSpaPhi, {a, c, double(n), lam})}, tol);
    sol.worst_case = iso_worst_case(a, b, a, c, tol);
    sol.value = value_genspa(inst, c, tol);
    sol.constants = {{"k_l", rc.k_l},
                     {"k_h", rc.k_h},
                     {"c", c},
                     {"Phi_0", lam * (a - c) / ((n - 1) * c)},
                     {"normalization_residual", (*sol.genspa_phi).curve().left_limit(b) - 1}};
    return sol;
}

SaddleSolution optimal_spa_no_reserve(const ProblemInstance& inst, const Tolerance& tol) {
    inst.validate();
    const int n = inst.n;
    SaddleSolution sol;
    sol.instance = inst;
    sol.cls = MechanismClass::SpaNoReserve;
    sol.regime = Regime::High;
    sol.mechanism = spa_fixed(inst.a, inst);
    sol.worst_case = n == 1 ? point_mass(inst.a, inst.b, inst.b)
                            : two_point(inst.a, inst.b, (n - 1) / (n - 1 + inst.lambda));
    sol.value = worst_regret_spa_fixed(inst, inst.a);
    sol.constants["r_star"] = inst.a;
    (void)tol;
    return sol;
}

SaddleSolution optimal_spa_rand(const ProblemInstance& inst, const Tolerance& tol) {
    inst.validate();
    const int n = inst.n;
    const double a = inst.a, b = inst.b, lam = inst.lambda, k = inst.k();
    auto rc = regime_constants(n, lam, tol);
    if (n == 1 || k <= rc.k_l) {
        auto sol = optimal_all(inst, tol);
        sol.cls = MechanismClass::SpaRand;
        sol.constants["k_h_prime"] = rc.k_h_prime;
        return sol;
    }
    if (k >= rc.k_h_prime) {
        auto sol = optimal_spa_no_reserve(inst, tol);
        sol.cls = MechanismClass::SpaRand;
        sol.constants["k_l"] = rc.k_l;
        sol.constants["k_h_prime"] = rc.k_h_prime;
        return sol;
    }
    auto s = solve_spa_rand_moderate(inst, tol);
    std::vector<Segment> phi;
    if (s.r_star > a) phi.push_back(constant_segment(a, s.r_star, s.Phi0));
    phi.push_back(form_segment(s.r_star, b, Form::SpaRandPhi, {s.c, s.d, double(n), lam}));
    SaddleSolution sol;
    sol.instance = inst;
    sol.cls = MechanismClass::SpaRand;
    sol.regime = Regime::Moderate;
    sol.mechanism = mixture_to_gugd(Curve(a, b, phi, {}, tol), empty_curve(b), 0.0, inst, "spa_rand_phi",
                                    {{"r_star", s.r_star}, {"c", s.c}, {"d", s.d}});
    sol.worst_case = iso_worst_case(a, b, s.r_star, s.c, tol);
    sol.value = value_spa_rand_moderate(inst, s, tol);
    sol.constants = {{"k_l", rc.k_l}, {"k_h_prime", rc.k_h_prime}, {"F_0", s.F0}, {"r_star", s.r_star},
                     {"c", s.c},      {"d", s.d},                  {"Phi_0", s.Phi0}};
    return sol;
}

SaddleSolution optimal_spa_det_solution(const ProblemInstance& inst, const Tolerance& tol) {
    auto det = optimal_spa_det(inst);
    SaddleSolution sol;
    sol.instance = inst;
    sol.cls = MechanismClass::SpaDet;
    sol.regime = det.r_star > inst.a ? Regime::Low : Regime::High;
    sol.mechanism = spa_fixed(det.r_star, inst);
    sol.worst_case = spa_fixed_worst_case(inst, det.r_star);
    sol.value = det.value;
    sol.constants["r_star"] = det.r_star;
    (void)tol;
    return sol;
}

SaddleSolution solve_class(MechanismClass cls, const ProblemInstance& inst, const Tolerance& tol) {
    switch (cls) {
        case MechanismClass::All: return optimal_all(inst, tol);
        case MechanismClass::Std: return optimal_std(inst, tol);
        case MechanismClass::SpaRand: return optimal_spa_rand(inst, tol);
        case MechanismClass::SpaDet: return optimal_spa_det_solution(inst, tol);
        case MechanismClass::SpaNoReserve: return optimal_spa_no_reserve(inst, tol);
    }
    throw DomainError("unknown class");
}

}  // namespace rauc
