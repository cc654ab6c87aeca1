#include "mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rauc {

namespace {

Curve step_curve(double a, double b, double at, double below, double above) {
    if (at <= a) return Curve(a, b, {constant_segment(a, b, above)});
    if (at >= b) return Curve(a, b, {constant_segment(a, b, below)}, above);
    return Curve(a, b, {constant_segment(a, at, below), constant_segment(at, b, above)});
}

Curve zero_curve(double a, double b) { return Curve(a, b, {constant_segment(a, b, 0.0)}); }

// a + (b-a)*t can land an ulp outside; snap those onto the ends
std::vector<double> checked_valuations(const std::vector<double>& vals, const ProblemInstance& inst) {
    if (vals.size() != static_cast<std::size_t>(inst.n))
        throw DomainError("valuation vector length differs from n");
    const double slack = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(inst.b));
    std::vector<double> out(vals);
    for (double& v : out) {
        if (!(v >= inst.a - slack && v <= inst.b + slack)) throw DomainError("valuation outside [a,b]");
        v = std::clamp(v, inst.a, inst.b);
    }
    return out;
}

// Largest valuation among the others and how many of them hold it.
std::pair<double, int> others_max(const std::vector<double>& vals, std::size_t i, double a) {
    double m = a;
    int cnt = 0;
    bool any = false;
    for (std::size_t j = 0; j < vals.size(); ++j) {
        if (j == i) continue;
        if (!any || vals[j] > m) {
            m = vals[j];
            cnt = 1;
            any = true;
        } else if (vals[j] == m) {
            ++cnt;
        }
    }
    return {m, cnt};
}

}  // namespace

PiecewiseCdf step_cdf(double a, double b, double r) {
    if (!(r >= a && r <= b)) throw DomainError("reserve outside [a,b]");
    return point_mass(a, b, r);
}

GuGdMechanism spa_fixed(double r, const ProblemInstance& inst) {
    inst.validate();
    if (!(r >= inst.a && r <= inst.b)) throw DomainError("spa_fixed: reserve outside [a,b]");
    GuGdMechanism m;
    m.n = inst.n;
    m.a = inst.a;
    m.b = inst.b;
    m.g_u = step_curve(inst.a, inst.b, r, 0.0, 1.0);
    m.g_d = zero_curve(inst.a, inst.b);
    m.v_star = inst.b;
    m.alpha = 0;
    m.form = "spa";
    m.params = {{"r", r}};
    return m;
}

GuGdMechanism pool_fixed(double tau, const ProblemInstance& inst) {
    inst.validate();
    if (!(tau >= inst.a && tau <= inst.b)) throw DomainError("pool_fixed: threshold outside [a,b]");
    GuGdMechanism m;
    m.n = inst.n;
    m.a = inst.a;
    m.b = inst.b;
    m.form = "pool";
    m.params = {{"tau", tau}};
    if (inst.n == 1 || tau == inst.a) {
        // n = 1 POOL always allocates; tau = a is SPA without reserve
        m.g_u = Curve(inst.a, inst.b, {constant_segment(inst.a, inst.b, 1.0)});
        m.g_d = zero_curve(inst.a, inst.b);
        m.v_star = inst.n == 1 ? inst.b : inst.a;
        m.alpha = 0;
        return m;
    }
    double q = 1.0 / inst.n;
    m.g_u = step_curve(inst.a, inst.b, tau, q, 1.0);
    m.g_d = step_curve(inst.a, inst.b, tau, q, 0.0);
    m.v_star = inst.a;
    m.alpha = q;
    return m;
}

GuGdMechanism mixture_to_gugd(const Curve& phi, const Curve& psi, double alpha, const ProblemInstance& inst,
                              std::string form, json params) {
    inst.validate();
    const int n = inst.n;
    const double a = inst.a, b = inst.b;
    if (!(alpha >= 0 && alpha <= 1.0 / n + 1e-15)) throw DomainError("mixture: alpha outside [0,1/n]");
    if (phi.lo() != a || psi.hi() != b || phi.hi() != psi.lo())
        throw DomainError("mixture: phi must cover [a,v*] and psi [v*,b]");
    const double vs = phi.hi();
    if (vs > a && std::abs(phi(vs) - (1 - n * alpha)) > 1e-9)
        throw DomainError("mixture: phi mass differs from 1 - n*alpha");
    if (vs < b && std::abs(psi(b) - n * alpha) > 1e-9)
        throw DomainError("mixture: psi mass differs from n*alpha");

    std::vector<Segment> gu, gd;
    std::optional<double> tu, td;
    if (vs > a) {
        for (auto s : phi.affine(alpha, 1.0).clipped(a, vs)) gu.push_back(s);
        gd.push_back(constant_segment(a, vs, alpha));
        if (vs == b && phi.terminal()) tu = alpha + *phi.terminal();
    }
    if (vs < b) {
        double keep = n == 1 ? 0.0 : 1.0;
        for (auto s : psi.affine(1 - (n - 1) * alpha, (n - 1.0) / n).clipped(vs, b)) gu.push_back(s);
        for (auto s : psi.affine(keep * alpha, -keep / n).clipped(vs, b)) gd.push_back(s);
        if (psi.terminal()) {
            tu = 1 - (n - 1) * alpha + (n - 1.0) / n * *psi.terminal();
            td = keep * (alpha - *psi.terminal() / n);
        }
    }
    if (n == 1) {
        gd.assign(1, constant_segment(a, b, 0.0));
        td.reset();
    }
    GuGdMechanism m;
    m.n = n;
    m.a = a;
    m.b = b;
    m.g_u = Curve(a, b, std::move(gu), tu, phi.tolerance());
    m.g_d = Curve(a, b, std::move(gd), td, phi.tolerance());
    m.v_star = vs;
    m.alpha = alpha;
    m.form = std::move(form);
    m.params = std::move(params);
    return m;
}

Mixture gugd_to_mixture(const GuGdMechanism& mech) {
    const double a = mech.a, b = mech.b, vs = mech.v_star, al = mech.alpha;
    const int n = mech.n;
    Mixture mx;
    mx.alpha = al;
    mx.v_star = vs;
    auto gu = mech.g_u.affine(-al, 1.0);
    std::optional<double> tphi;
    if (vs == b && gu.terminal()) tphi = gu.terminal();
    mx.phi = Curve(a, vs, gu.clipped(a, vs), tphi, mech.g_u.tolerance());
    if (n == 1) {
        // Psi = g_u + (n-1) g_d - 1 + n alpha  reduces to g_u - 1 + alpha
        auto ps = mech.g_u.affine(al - 1, 1.0);
        std::optional<double> t;
        if (ps.terminal()) t = ps.terminal();
        mx.psi = Curve(vs, b, ps.clipped(vs, b), t, mech.g_u.tolerance());
        return mx;
    }
    auto gd = mech.g_d.affine(n * al, -n);
    std::optional<double> tpsi;
    if (gd.terminal()) tpsi = gd.terminal();
    mx.psi = Curve(vs, b, gd.clipped(vs, b), tpsi, mech.g_d.tolerance());
    return mx;
}

AuctionOutcome allocate_and_pay(const GuGdMechanism& mech, const std::vector<double>& raw,
                                const ProblemInstance& inst) {
    const auto vals = checked_valuations(raw, inst);
    const double a = inst.a;
    AuctionOutcome out;
    out.allocations.resize(vals.size());
    out.payments.resize(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        auto [m, cnt] = vals.size() == 1 ? std::pair<double, int>{a, 0} : others_max(vals, i, a);
        double v = vals[i];
        double gdm = cnt > 0 ? mech.g_d(m) : 0.0;
        double base = (m - a) * gdm;  // envelope over [a, m)
        if (v < m) {
            out.allocations[i] = gdm;
            out.payments[i] = a * gdm;
        } else if (v == m) {
            double k = cnt + 1.0;
            double x = mech.g_u(m) / k + (k - 1) / k * gdm;
            out.allocations[i] = x;
            out.payments[i] = m * x - base;
        } else {
            double x = mech.g_u(v);
            out.allocations[i] = x;
            out.payments[i] = v * x - base - mech.g_u.integral(m, v);
        }
    }
    return out;
}

AuctionOutcome genspa_allocate_and_pay(const PiecewiseCdf& phi, const std::vector<double>& raw,
                                       const ProblemInstance& inst) {
    if (inst.n < 2) throw DomainError("GenSPA needs n >= 2");
    const auto vals = checked_valuations(raw, inst);
    const double a = inst.a;
    AuctionOutcome out;
    out.allocations.resize(vals.size());
    out.payments.resize(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        auto [m, cnt] = others_max(vals, i, a);
        double v = vals[i];
        if (v < m) continue;
        if (v == m) {
            double x = (m > a ? phi(m) : 1.0) / (cnt + 1.0);
            out.allocations[i] = x;
            out.payments[i] = m * x;
        } else if (m > a) {
            double x = phi(v);
            out.allocations[i] = x;
            out.payments[i] = v * x - phi.curve().integral(m, v);
        } else {
            out.allocations[i] = 1.0;
            out.payments[i] = a;
        }
    }
    return out;
}

}  // namespace rauc
