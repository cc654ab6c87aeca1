#include "domain.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

namespace rauc {

void ProblemInstance::validate() const {
    if (!(a >= 0) || !(b > a) || !std::isfinite(b))
        throw DomainError("instance: need 0 <= a < b");
    if (n < 1) throw DomainError("instance: need n >= 1");
    if (!(lambda > 0 && lambda <= 1)) throw DomainError("instance: need 0 < lambda <= 1");
}

const char* to_string(MechanismClass c) {
    switch (c) {
        case MechanismClass::All: return "ALL";
        case MechanismClass::Std: return "STD";
        case MechanismClass::SpaRand: return "SPA_RAND";
        case MechanismClass::SpaDet: return "SPA_DET";
        case MechanismClass::SpaNoReserve: return "SPA_NO_RESERVE";
    }
    return "?";
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Low: return "LOW";
        case Regime::Moderate: return "MODERATE";
        case Regime::High: return "HIGH";
    }
    return "?";
}

MechanismClass parse_class(const std::string& s) {
    std::string t;
    for (char ch : s) t += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (t == "ALL") return MechanismClass::All;
    if (t == "STD") return MechanismClass::Std;
    if (t == "SPA_RAND") return MechanismClass::SpaRand;
    if (t == "SPA_DET") return MechanismClass::SpaDet;
    if (t == "SPA_NO_RESERVE" || t == "SPA_A") return MechanismClass::SpaNoReserve;
    throw DomainError("unknown mechanism class '" + s + "'");
}

namespace {

constexpr std::pair<Form, const char*> kFormNames[] = {
    {Form::Constant, "constant"},
    {Form::IsoRevenue, "iso_revenue"},
    {Form::ConstVirtualValue, "const_virtual_value"},
    {Form::PhiLow, "phi_low"},
    {Form::PsiHigh, "psi_high"},
    {Form::GenSpaPhi, "genspa_phi"},
    {Form::SpaRandPhi, "spa_rand_phi"},
};

// lambda * x * T_n(x), x = (v-r)/v
double phi_low(double v, double r, int n, double lam, const Tolerance& tol) {
    if (v <= r) return 0.0;
    double x = (v - r) / v;
    return lam * x * log_tail_scaled(n, x, r / v, tol);
}

double phi_low_d(double v, double r, int n, double lam, const Tolerance& tol) {
    if (v < r) return 0.0;
    double x = (v - r) / v;
    double t = x == 0 ? 1.0 / n : log_tail_scaled(n, x, r / v, tol);
    return lam * (1.0 / v - (n - 1) * r * t / (v * v));
}

double psi_high(double v, double a, double phi0, int n, double lam, double K, const Tolerance& tol) {
    double x = (v - a) / (v - phi0), om = (a - phi0) / (v - phi0);
    double u = x * log_tail_scaled(n + 1, x, om, tol);
    double head = K == 0 ? 0.0 : K / std::pow(x, n);
    return head + 1.0 / n + lam * u;
}

double psi_high_d(double v, double a, double phi0, int n, double lam, double K, const Tolerance& tol) {
    double x = (v - a) / (v - phi0), om = (a - phi0) / (v - phi0);
    double dx = (a - phi0) / ((v - phi0) * (v - phi0));
    double du = 1.0 / om - n * log_tail_scaled(n + 1, x, om, tol);
    double dk = K == 0 ? 0.0 : -n * K / std::pow(x, n + 1);
    return dx * (dk + lam * du);
}

// Generous-SPA reserve CDF on (a, b].  With vt = 1 - c/v, at = 1 - c/a:
//   Phi = lambda * N / Dn,  N = int_at^vt u^(n-1)/(1-u) du,  Dn = vt^(n-1) - at^(n-1)
// Both are divided by delta = vt - at before forming the ratio.
struct GenSpaEval {
    double value, dvt;  // Phi and dPhi/dvt
};

GenSpaEval genspa_eval(double v, double a, double c, int n, double lam, const Tolerance& tol) {
    double at = 1 - c / a, vt = 1 - c / v;
    double delta = c * (v - a) / (a * v);
    auto q = [n](double u) { return std::pow(u, n - 1) / (1 - u); };
    auto q1 = [n](double u) {
        double p = n >= 2 ? (n - 1) * std::pow(u, n - 2) : 0.0;
        return p / (1 - u) + std::pow(u, n - 1) / ((1 - u) * (1 - u));
    };
    auto q2 = [n](double u) {
        double om = 1 - u;
        double t0 = n >= 3 ? (n - 1.0) * (n - 2) * std::pow(u, n - 3) / om : 0.0;
        double t1 = n >= 2 ? 2.0 * (n - 1) * std::pow(u, n - 2) / (om * om) : 0.0;
        return t0 + t1 + 2 * std::pow(u, n - 1) / (om * om * om);
    };
    // h_k = (vt^k - at^k)/(vt - at), and its vt-derivative
    std::vector<double> h(n + 1, 0.0), dh(n + 1, 0.0);
    h[1] = 1;
    double atk = at;
    for (int k = 1; k < n; ++k) {
        h[k + 1] = vt * h[k] + atk;
        dh[k + 1] = h[k] + vt * dh[k];
        atk *= at;
    }
    double D = h[n - 1], dD = dh[n - 1];
    double nq, dnq;
    if (delta < 1e-5 * std::min(1 - at, at)) {
        nq = q(at) + q1(at) * delta / 2 + q2(at) * delta * delta / 6;
        dnq = q1(at) / 2 + q2(at) * delta / 3;
        if (D == 0) return {0.0, 0.0};
        double val = lam * nq / D;
        return {val, lam * (dnq * D - nq * dD) / (D * D)};
    }
    if (vt <= 0.5) {
        // sum_{k>=n} h_k / k with h_{k+1} = vt h_k + at^k
        double hk = h[n - 1] * vt + std::pow(at, n - 1);
        double atp = std::pow(at, n);
        nq = 0;
        for (int k = n; k < 200000; ++k) {
            double term = hk / k;
            nq += term;
            if (term * vt / (1 - vt) < tol.series_term_tol * std::max(1.0, nq)) break;
            hk = vt * hk + atp;
            atp *= at;
        }
    } else {
        double head = 0;
        for (int k = 1; k < n; ++k) head += h[k] / k;
        nq = std::log1p((v - a) / a) / delta - head;
    }
    double val = lam * nq / D;
    double dvt = (lam * q(vt) - (n - 1) * (n >= 2 ? std::pow(vt, n - 2) : 0.0) * val) / (delta * D);
    return {val, dvt};
}

double spa_rand_phi(double v, double c, double d, int n, double lam, const Tolerance& tol) {
    double x = (v - c) / v;
    double t = log_tail_scaled(n, x, c / v, tol);
    double head = d == 0 ? 0.0 : d / std::pow(x, n - 1);
    return lam * (head + x * t);
}

double spa_rand_phi_d(double v, double c, double d, int n, double lam, const Tolerance& tol) {
    double x = (v - c) / v;
    double t = log_tail_scaled(n, x, c / v, tol);
    double head = d == 0 ? 0.0 : d / std::pow(x, n);
    return lam * (1.0 / v - (n - 1) * c * (head + t) / (v * v));
}

double form_value(Form f, const FormParams& p, double v, const Tolerance& tol) {
    switch (f) {
        case Form::Constant: return p[0];
        case Form::IsoRevenue: return 1 - p[0] / v;
        case Form::ConstVirtualValue: return (v - p[0]) / (v - p[1]);
        case Form::PhiLow: return phi_low(v, p[0], static_cast<int>(p[1]), p[2], tol);
        case Form::PsiHigh:
            return psi_high(v, p[0], p[1], static_cast<int>(p[2]), p[3], p[4], tol);
        case Form::GenSpaPhi: {
            int n = static_cast<int>(p[2]);
            if (v <= p[0]) return p[3] * (p[0] - p[1]) / ((n - 1) * p[1]);
            return genspa_eval(v, p[0], p[1], n, p[3], tol).value;
        }
        case Form::SpaRandPhi: return spa_rand_phi(v, p[0], p[1], static_cast<int>(p[2]), p[3], tol);
    }
    throw DomainError("unknown form");
}

double form_derivative(Form f, const FormParams& p, double v, const Tolerance& tol) {
    switch (f) {
        case Form::Constant: return 0.0;
        case Form::IsoRevenue: return p[0] / (v * v);
        case Form::ConstVirtualValue: return (p[0] - p[1]) / ((v - p[1]) * (v - p[1]));
        case Form::PhiLow: return phi_low_d(v, p[0], static_cast<int>(p[1]), p[2], tol);
        case Form::PsiHigh:
            return psi_high_d(v, p[0], p[1], static_cast<int>(p[2]), p[3], p[4], tol);
        case Form::GenSpaPhi: {
            double a = p[0], c = p[1];
            double vv = std::max(v, a);
            return genspa_eval(vv, a, c, static_cast<int>(p[2]), p[3], tol).dvt * c / (vv * vv);
        }
        case Form::SpaRandPhi:
            return spa_rand_phi_d(v, p[0], p[1], static_cast<int>(p[2]), p[3], tol);
    }
    throw DomainError("unknown form");
}

std::size_t param_count(Form f) {
    switch (f) {
        case Form::Constant: return 1;
        case Form::IsoRevenue: return 1;
        case Form::ConstVirtualValue: return 2;
        case Form::PhiLow: return 3;
        case Form::PsiHigh: return 5;
        case Form::GenSpaPhi: return 4;
        case Form::SpaRandPhi: return 4;
    }
    return 0;
}

}  // namespace

const char* to_string(Form f) {
    for (auto& [k, name] : kFormNames)
        if (k == f) return name;
    return "?";
}

Form parse_form(const std::string& s) {
    for (auto& [k, name] : kFormNames)
        if (s == name) return k;
    throw DomainError("unknown form '" + s + "'");
}

double Segment::value(double v, const Tolerance& tol) const {
    return offset + scale * form_value(form, p, v, tol);
}

double Segment::derivative(double v, const Tolerance& tol) const {
    return scale * form_derivative(form, p, v, tol);
}

Segment constant_segment(double lo, double hi, double value) {
    Segment s;
    s.lo = lo;
    s.hi = hi;
    s.form = Form::Constant;
    s.p[0] = value;
    return s;
}

// Cumulative integral of the curve on cubic-Hermite nodes, built once.
struct Curve::Table {
    std::once_flag once;
    std::vector<double> x, G, g;
};

Curve::Curve(double lo, double hi, std::vector<Segment> segs, std::optional<double> terminal,
             Tolerance tol)
    : lo_(lo), hi_(hi), segs_(std::move(segs)), terminal_(terminal), tol_(tol),
      table_(std::make_shared<Table>()) {
    if (!(lo <= hi)) throw DomainError("curve: lo > hi");
    if (segs_.empty()) throw DomainError("curve: no segments");
    if (lo < hi) {
        std::erase_if(segs_, [](const Segment& s) { return !(s.lo < s.hi); });
        if (segs_.empty()) throw DomainError("curve: no segments");
    } else {
        segs_.resize(1);
    }
    if (segs_.front().lo != lo || segs_.back().hi != hi) throw DomainError("curve: segments do not cover [lo,hi]");
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (segs_[i].lo > segs_[i].hi) throw DomainError("curve: inverted segment");
        if (i && segs_[i].lo != segs_[i - 1].hi) throw DomainError("curve: segments not contiguous");
    }
}

const Segment& Curve::seg_at(double v) const {
    if (!(v >= lo_ && v <= hi_)) throw DomainError("curve: argument " + std::to_string(v) + " outside support");
    auto it = std::upper_bound(segs_.begin(), segs_.end(), v,
                               [](double x, const Segment& s) { return x < s.lo; });
    if (it != segs_.begin()) --it;
    return *it;
}

const Segment& Curve::seg_left(double v) const {
    if (!(v > lo_ && v <= hi_)) return seg_at(v);
    auto it = std::lower_bound(segs_.begin(), segs_.end(), v,
                               [](const Segment& s, double x) { return s.hi < x; });
    if (it == segs_.end()) --it;
    return *it;
}

double Curve::operator()(double v) const {
    if (v == hi_ && terminal_) return *terminal_;
    return seg_at(v).value(v, tol_);
}

double Curve::left_limit(double v) const {
    if (v == lo_) return (*this)(v);
    return seg_left(v).value(v, tol_);
}

double Curve::derivative(double v) const { return seg_at(v).derivative(v, tol_); }

std::vector<std::pair<double, double>> Curve::jumps(double eps) const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i < segs_.size(); ++i) {
        double s = segs_[i].lo;
        if (s >= hi_) break;
        double j = segs_[i].value(s, tol_) - seg_left(s).value(s, tol_);
        if (std::abs(j) > eps) {
            if (!out.empty() && out.back().first == s) out.back().second += j;
            else out.emplace_back(s, j);
        }
    }
    if (terminal_ && hi_ > lo_) {
        double j = *terminal_ - left_limit(hi_);
        if (std::abs(j) > eps) out.emplace_back(hi_, j);
    }
    return out;
}

std::vector<double> Curve::breakpoints() const {
    std::vector<double> bp{lo_};
    for (auto& s : segs_)
        if (s.lo > bp.back()) bp.push_back(s.lo);
    if (hi_ > bp.back()) bp.push_back(hi_);
    return bp;
}

Curve Curve::affine(double offset, double scale) const {
    auto segs = segs_;
    for (auto& s : segs) {
        s.offset = offset + scale * s.offset;
        s.scale *= scale;
    }
    std::optional<double> term;
    if (terminal_) term = offset + scale * *terminal_;
    return Curve(lo_, hi_, std::move(segs), term, tol_);
}

std::vector<Segment> Curve::clipped(double lo, double hi) const {
    std::vector<Segment> out;
    for (auto s : segs_) {
        double l = std::max(s.lo, lo), h = std::min(s.hi, hi);
        if (l < h || (l == h && out.empty() && lo == hi)) {
            s.lo = l;
            s.hi = h;
            out.push_back(s);
        }
    }
    if (out.empty()) {
        // degenerate point interval: keep the piece active there
        Segment s = seg_at(std::clamp(lo, lo_, hi_));
        s.lo = lo;
        s.hi = hi;
        out.push_back(s);
    }
    return out;
}

double Curve::cumulative(double x) const {
    auto& T = *table_;
    std::call_once(T.once, [this, &T] {
        using GL = boost::math::quadrature::gauss<double, 15>;
        double G = 0;
        for (auto& s : segs_) {
            if (s.hi <= s.lo) continue;
            auto f = [&s, this](double t) { return s.value(t, tol_); };
            auto gl = [&](double l, double r) { return GL::integrate(f, l, r); };
            // Nodes at both ends of each accepted piece.  Derivative data uses
            // one-sided segment values, so jumps at segment ends are harmless.
            struct Job { double l, r, I; int depth; };
            std::vector<Job> stack{{s.lo, s.hi, gl(s.lo, s.hi), 0}};
            std::vector<std::pair<double, double>> pieces;  // (right end, integral), in order
            std::vector<Job> done;
            while (!stack.empty()) {
                Job j = stack.back();
                stack.pop_back();
                double m = 0.5 * (j.l + j.r), w = j.r - j.l;
                double Il = gl(j.l, m), Ir = gl(m, j.r);
                double gL = f(j.l), gR = f(j.r);
                // Hermite antiderivative at the midpoint: w*(gL+gR)/2 ... symmetric cubic
                double H = j.I / 2 + w * (gL - gR) / 8;
                double tolA = 1e-13 * w;
                if (j.depth >= 40 || (std::abs(Il + Ir - j.I) <= tolA && std::abs(H - Il) <= tolA)) {
                    done.push_back({j.l, j.r, Il + Ir, j.depth});
                } else {
                    stack.push_back({m, j.r, Ir, j.depth + 1});
                    stack.push_back({j.l, m, Il, j.depth + 1});
                }
            }
            for (auto& j : done) {
                if (T.x.empty() || T.x.back() != j.l) {
                    T.x.push_back(j.l);
                    T.G.push_back(G);
                    T.g.push_back(f(j.l));
                } else {
                    T.g.back() = f(j.l);  // right-hand slope at a segment boundary
                }
                G += j.I;
                T.x.push_back(j.r);
                T.G.push_back(G);
                T.g.push_back(s.value(j.r, tol_));
            }
        }
        if (T.x.empty()) {
            T.x = {lo_};
            T.G = {0};
            T.g = {0};
        }
    });
    if (x <= T.x.front()) return 0.0;
    if (x >= T.x.back()) return T.G.back();
    std::size_t i = static_cast<std::size_t>(std::upper_bound(T.x.begin(), T.x.end(), x) - T.x.begin()) - 1;
    double x0 = T.x[i], x1 = T.x[i + 1], h = x1 - x0;
    if (h <= 0) return T.G[i];
    double t = (x - x0) / h;
    // right slope at x0 is the value of the segment starting there
    double g0 = T.g[i];
    double g1 = seg_left(x1).value(x1, tol_);
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * T.G[i] + h10 * h * g0 + h01 * T.G[i + 1] + h11 * h * g1;
}

double Curve::integral(double x, double y) const {
    if (x < lo_ || y > hi_ || x > y) throw DomainError("curve integral: bad limits");
    if (x == y) return 0.0;
    return cumulative(y) - cumulative(x);
}

json Curve::to_json() const {
    json segs = json::array();
    for (auto& s : segs_) {
        json p = json::array();
        for (std::size_t i = 0; i < param_count(s.form); ++i) p.push_back(s.p[i]);
        json js{{"lo", s.lo}, {"hi", s.hi}, {"form", to_string(s.form)}, {"params", p}};
        if (s.offset != 0 || s.scale != 1) {
            js["offset"] = s.offset;
            js["scale"] = s.scale;
        }
        segs.push_back(js);
    }
    json j{{"lo", lo_}, {"hi", hi_}, {"segments", segs}};
    if (terminal_) j["terminal"] = *terminal_;
    return j;
}

namespace {
std::vector<Segment> segments_from_json(const json& arr) {
    std::vector<Segment> segs;
    for (auto& js : arr) {
        Segment s;
        s.lo = js.at("lo").get<double>();
        s.hi = js.at("hi").get<double>();
        s.form = parse_form(js.at("form").get<std::string>());
        auto p = js.at("params");
        if (p.size() != param_count(s.form)) throw DomainError("segment: wrong parameter count");
        for (std::size_t i = 0; i < p.size(); ++i) s.p[i] = p[i].get<double>();
        s.offset = js.value("offset", 0.0);
        s.scale = js.value("scale", 1.0);
        segs.push_back(s);
    }
    return segs;
}
}  // namespace

Curve Curve::from_json(const json& j, Tolerance tol) {
    std::optional<double> term;
    if (j.contains("terminal")) term = j.at("terminal").get<double>();
    return Curve(j.at("lo").get<double>(), j.at("hi").get<double>(), segments_from_json(j.at("segments")),
                 term, tol);
}

// ---------------------------------------------------------------- CDF

PiecewiseCdf::PiecewiseCdf(double a, double b, std::vector<Segment> segs, Tolerance tol)
    : curve_(a, b, std::move(segs), 1.0, tol) {}

double PiecewiseCdf::operator()(double v) const { return curve_(v); }

double PiecewiseCdf::left_limit(double v) const {
    if (v == lo()) return 0.0;
    return curve_.left_limit(v);
}

std::vector<std::pair<double, double>> PiecewiseCdf::atoms(double eps) const {
    std::vector<std::pair<double, double>> out;
    double fa = curve_(lo());
    if (fa > eps) out.emplace_back(lo(), fa);
    for (auto& j : curve_.jumps(eps))
        if (j.second > eps) out.push_back(j);
    return out;
}

double PiecewiseCdf::atom_at(double v, double eps) const {
    double m = (*this)(v) - left_limit(v);
    return m > eps ? m : 0.0;
}

double PiecewiseCdf::quantile(double u) const {
    if (!(u > 0 && u < 1)) throw DomainError("quantile: u outside (0,1)");
    const auto& tol = curve_.tolerance();
    for (auto& s : curve_.segments()) {
        if (s.hi <= s.lo) continue;
        double Flo = s.value(s.lo, tol);
        if (u <= Flo) return s.lo;
        double Fhi = s.value(s.hi, tol);
        if (u >= Fhi) continue;
        double w = (u - s.offset) / s.scale;
        double v;
        switch (s.form) {
            case Form::IsoRevenue: v = s.p[0] / (1 - w); break;
            case Form::ConstVirtualValue: v = (s.p[0] - w * s.p[1]) / (1 - w); break;
            default:
                v = find_root([&](double t) { return s.value(t, tol) - u; }, s.lo, s.hi, tol);
        }
        return std::clamp(v, s.lo, s.hi);
    }
    return hi();
}

double uniform01(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

std::vector<double> PiecewiseCdf::sample(std::uint64_t seed, std::size_t count) const {
    std::mt19937_64 gen(mix_seed(seed, 0));
    std::vector<double> out(count);
    for (auto& x : out) x = quantile(uniform01(gen()));
    return out;
}

void PiecewiseCdf::validate(std::size_t grid) const {
    double a = lo(), b = hi();
    if ((*this)(b) != 1.0) throw DomainError("cdf: F(b) != 1");
    double prev = -1;
    for (std::size_t i = 0; i <= grid; ++i) {
        double v = i == grid ? b : a + (b - a) * static_cast<double>(i) / grid;
        double f = (*this)(v);
        if (!(f >= -1e-14 && f <= 1 + 1e-14)) throw DomainError("cdf: value outside [0,1] at " + std::to_string(v));
        if (f < prev - 1e-12) throw DomainError("cdf: decreasing at " + std::to_string(v));
        prev = f;
    }
    double total = 0;
    for (auto& [loc, m] : atoms()) total += m;
    if (total > 1 + 1e-12) throw DomainError("cdf: atom masses exceed 1");
}

json PiecewiseCdf::to_json() const {
    json atoms_j = json::array();
    for (auto& [loc, m] : atoms()) atoms_j.push_back({loc, m});
    json j = curve_.to_json();
    j.erase("terminal");
    j["atoms"] = atoms_j;
    return j;
}

PiecewiseCdf PiecewiseCdf::from_json(const json& j, Tolerance tol) {
    PiecewiseCdf F(j.at("lo").get<double>(), j.at("hi").get<double>(), segments_from_json(j.at("segments")),
                   tol);
    return F;
}

double cdf_eval(const PiecewiseCdf& F, double v) { return F(v); }

std::vector<double> cdf_sample(const PiecewiseCdf& F, std::uint64_t seed, std::size_t count) {
    if (count < 1) throw DomainError("cdf_sample: count must be >= 1");
    return F.sample(seed, count);
}

PiecewiseCdf point_mass(double a, double b, double at) {
    if (!(at >= a && at <= b)) throw DomainError("point_mass: location outside support");
    if (at == b) return PiecewiseCdf(a, b, {constant_segment(a, b, 0.0)});
    if (at == a) return PiecewiseCdf(a, b, {constant_segment(a, b, 1.0)});
    return PiecewiseCdf(a, b, {constant_segment(a, at, 0.0), constant_segment(at, b, 1.0)});
}

PiecewiseCdf two_point(double a, double b, double mass_a) {
    return PiecewiseCdf(a, b, {constant_segment(a, b, mass_a)});
}

// ---------------------------------------------------------------- mechanisms

void GuGdMechanism::validate(std::size_t grid, double eps) const {
    double prev = -1;
    for (std::size_t i = 0; i <= grid; ++i) {
        double v = i == grid ? b : a + (b - a) * static_cast<double>(i) / grid;
        double u = g_u(v), d = g_d(v);
        if (u < prev - eps) throw DomainError("mechanism: g_u decreasing at " + std::to_string(v));
        prev = u;
        if (u < -eps || d < -eps || u > 1 + eps) throw DomainError("mechanism: allocation outside [0,1]");
        if (u + (n - 1) * d > 1 + eps) throw DomainError("mechanism: total allocation above 1");
        if (n > 1 && v <= v_star && v < b && std::abs(d - alpha) > eps)
            throw DomainError("mechanism: g_d != alpha below v*");
        if (v >= v_star && n > 1 && v_star < b && std::abs(u + (n - 1) * d - 1) > eps)
            throw DomainError("mechanism: pooling identity fails above v*");
    }
}

json GuGdMechanism::to_json() const {
    return json{{"n", n}, {"a", a}, {"b", b}, {"v_star", v_star}, {"alpha", alpha}, {"form", form},
                {"params", params}, {"g_u", g_u.to_json()}, {"g_d", g_d.to_json()}};
}

double AuctionOutcome::revenue() const {
    double s = 0;
    for (double p : payments) s += p;
    return s;
}

json to_json(const ProblemInstance& inst) {
    return json{{"a", inst.a}, {"b", inst.b}, {"n", inst.n}, {"lambda", inst.lambda}};
}

ProblemInstance instance_from_json(const json& j) {
    ProblemInstance p{j.at("a").get<double>(), j.at("b").get<double>(), j.at("n").get<int>(),
                      j.at("lambda").get<double>()};
    p.validate();
    return p;
}

json SaddleSolution::to_json() const {
    json c = json::object();
    for (auto& [k, v] : constants) c[k] = v;
    json j{{"instance", rauc::to_json(instance)}, {"class", rauc::to_string(cls)},
           {"regime", rauc::to_string(regime)}, {"value", value}, {"constants", c},
           {"worst_case", worst_case.to_json()}};
    if (mechanism) j["mechanism"] = mechanism->to_json();
    if (genspa_phi) j["genspa_phi"] = genspa_phi->to_json();
    return j;
}

}  // namespace rauc
