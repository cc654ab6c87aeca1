#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "numerics.hpp"

namespace rauc {

using json = nlohmann::json;

struct ProblemInstance {
    double a = 0;
    double b = 1;
    int n = 1;
    double lambda = 1;

    void validate() const;
    double k() const { return a / b; }
};

enum class MechanismClass { All, Std, SpaRand, SpaDet, SpaNoReserve };
enum class Regime { Low, Moderate, High };

const char* to_string(MechanismClass c);
const char* to_string(Regime r);
MechanismClass parse_class(const std::string& s);

// Closed-form pieces.  Parameter layouts:
//   Constant          [value]
//   IsoRevenue        [c]                    1 - c/v
//   ConstVirtualValue [a, phi0]              (v-a)/(v-phi0)
//   PhiLow            [r, n, lambda]         lambda (v/(v-r))^(n-1) int_r^v (t-r)^(n-1)/t^n dt
//   PsiHigh           [a, phi0, n, lambda, K]  K/x^n + 1/n + lambda sum_{k>n} x^(k-n)/k,
//                                            x = (v-a)/(v-phi0)
//   GenSpaPhi         [a, c, n, lambda]      reserve CDF of the generous SPA
//   SpaRandPhi        [c, d, n, lambda]      reserve CDF density part of SPA with random reserve
enum class Form { Constant, IsoRevenue, ConstVirtualValue, PhiLow, PsiHigh, GenSpaPhi, SpaRandPhi };

const char* to_string(Form f);
Form parse_form(const std::string& s);

using FormParams = std::array<double, 5>;

struct Segment {
    double lo = 0, hi = 0;
    Form form = Form::Constant;
    FormParams p{};
    double offset = 0;
    double scale = 1;

    double value(double v, const Tolerance& tol) const;
    double derivative(double v, const Tolerance& tol) const;
};

Segment constant_segment(double lo, double hi, double value);

// Piecewise closed-form function on [lo,hi].  Segment i covers [lo_i, hi_i); the
// last one also covers hi unless a terminal value overrides the endpoint.
class Curve {
public:
    Curve() = default;
    Curve(double lo, double hi, std::vector<Segment> segs, std::optional<double> terminal = {},
          Tolerance tol = {});

    double operator()(double v) const;
    double left_limit(double v) const;
    double derivative(double v) const;
    double integral(double x, double y) const;

    // (location, signed size) for each discontinuity in (lo, hi]
    std::vector<std::pair<double, double>> jumps(double eps = 1e-14) const;
    std::vector<double> breakpoints() const;

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<Segment>& segments() const { return segs_; }
    std::optional<double> terminal() const { return terminal_; }
    const Tolerance& tolerance() const { return tol_; }

    Curve affine(double offset, double scale) const;
    // Segments overlapping [lo, hi], clipped.
    std::vector<Segment> clipped(double lo, double hi) const;

    json to_json() const;
    static Curve from_json(const json& j, Tolerance tol = {});

private:
    const Segment& seg_at(double v) const;
    const Segment& seg_left(double v) const;
    double cumulative(double x) const;

    struct Table;
    double lo_ = 0, hi_ = 0;
    std::vector<Segment> segs_;
    std::optional<double> terminal_;
    Tolerance tol_;
    std::shared_ptr<Table> table_;
};

// Right-continuous CDF on [a,b] with F(b) = 1.  Atoms are derived from the
// discontinuities of the segment forms (mass at a is F(a)).
class PiecewiseCdf {
public:
    PiecewiseCdf() = default;
    PiecewiseCdf(double a, double b, std::vector<Segment> segs, Tolerance tol = {});

    double operator()(double v) const;
    double left_limit(double v) const;
    double density(double v) const { return curve_.derivative(v); }
    std::vector<std::pair<double, double>> atoms(double eps = 1e-14) const;
    double atom_at(double v, double eps = 1e-14) const;

    double quantile(double u) const;
    std::vector<double> sample(std::uint64_t seed, std::size_t count) const;

    double lo() const { return curve_.lo(); }
    double hi() const { return curve_.hi(); }
    const Curve& curve() const { return curve_; }

    // Throws DomainError if the CDF invariants fail on a uniform grid.
    void validate(std::size_t grid = 10000) const;

    json to_json() const;
    static PiecewiseCdf from_json(const json& j, Tolerance tol = {});

private:
    Curve curve_;
};

double cdf_eval(const PiecewiseCdf& F, double v);
std::vector<double> cdf_sample(const PiecewiseCdf& F, std::uint64_t seed, std::size_t count);

// Inverse transform for a uniform draw in (0,1).
double uniform01(std::uint64_t bits);

PiecewiseCdf point_mass(double a, double b, double at);
PiecewiseCdf two_point(double a, double b, double mass_a);

struct GuGdMechanism {
    int n = 1;
    double a = 0, b = 1;
    Curve g_u, g_d;
    double v_star = 1;
    double alpha = 0;
    std::string form;
    json params = json::object();

    void validate(std::size_t grid = 10000, double eps = 1e-10) const;
    json to_json() const;
};

struct AuctionOutcome {
    std::vector<double> allocations;
    std::vector<double> payments;
    double revenue() const;
};

struct SaddleSolution {
    ProblemInstance instance;
    MechanismClass cls = MechanismClass::All;
    Regime regime = Regime::Low;
    std::optional<GuGdMechanism> mechanism;   // every class except the GenSPA branch
    std::optional<PiecewiseCdf> genspa_phi;   // STD with a/b >= k_l
    PiecewiseCdf worst_case;
    double value = 0;
    std::map<std::string, double> constants;

    json to_json() const;
};

json to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const json& j);

}  // namespace rauc
