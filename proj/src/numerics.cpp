#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace rauc {

void Tolerance::validate() const {
    if (!(quad_abs_tol > 0) || !(root_abs_tol > 0) || !(series_term_tol > 0))
        throw DomainError("tolerances must be strictly positive");
    if (max_iter < 1) throw DomainError("max_iter must be at least 1");
}

double integrate(const ScalarFn& f, double lo, double hi, const Tolerance& tol) {
    if (!(lo <= hi)) throw DomainError("integrate: lo > hi");
    if (lo == hi) return 0.0;

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    constexpr unsigned kMaxDepth = 24;

    // Boost's stopping rule is relative; scale it by a coarse L1 so the
    // leaves share an absolute budget of quad_abs_tol.
    double err = 0.0, l1 = 0.0;
    GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    double rel = l1 > 0 ? tol.quad_abs_tol / l1 : 1.0;
    rel = std::max(rel, 4 * std::numeric_limits<double>::epsilon());

    double value = GK::integrate(f, lo, hi, kMaxDepth, rel, &err, &l1);
    if (!std::isfinite(value)) throw NumericalError("integrate: non-finite integrand", value);
    double floor = 64 * std::numeric_limits<double>::epsilon() * l1;
    if (err > std::max(tol.quad_abs_tol, floor))
        throw NumericalError("integrate: no convergence (error estimate " + std::to_string(err) + ")",
                             value);
    return value;
}

double find_root(const ScalarFn& f, double lo, double hi, const Tolerance& tol) {
    if (!(lo <= hi)) throw DomainError("find_root: lo > hi");
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (std::isnan(flo) || std::isnan(fhi) || (flo > 0) == (fhi > 0))
        throw BracketError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");

    double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    double width = tol.root_abs_tol * scale;
    auto done = [width](double l, double h) { return std::abs(h - l) <= width; };

    std::uintmax_t iters = static_cast<std::uintmax_t>(tol.max_iter);
    std::pair<double, double> br{lo, hi};
    try {
        br = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, iters);
    } catch (const std::exception&) {
        br = {lo, hi};
    }

    // Bisection fallback from whatever bracket remains.
    double l = br.first, h = br.second;
    double fl = f(l), fh = f(h);
    if (fl == 0) return l;
    if (fh == 0) return h;
    if ((fl > 0) == (fh > 0)) {
        l = lo; h = hi; fl = flo; fh = fhi;
    }
    for (int i = 0; i < 4 * tol.max_iter && !done(l, h); ++i) {
        double m = 0.5 * (l + h);
        if (m <= l || m >= h) break;
        double fm = f(m);
        if (fm == 0) return m;
        if ((fm > 0) == (fl > 0)) { l = m; fl = fm; } else { h = m; fh = fm; }
    }
    return std::abs(fl) <= std::abs(fh) ? l : h;
}

double log_tail_scaled(int s, double x, double om, const Tolerance& tol) {
    if (s < 1) throw DomainError("log_tail: start index must be >= 1");
    // x may round to 1 when om is tiny; om carries the information
    if (!(x >= 0) || !(om > 0) || x > 1) throw DomainError("log_tail: requires 0 <= x < 1");
    if (x == 0) return 1.0 / s;
    if (x <= 0.5) {
        double sum = 0, p = 1;
        for (int j = 0; j < 100000; ++j) {
            double term = p / (s + j);
            sum += term;
            // geometric tail bound term * x / (1 - x)
            if (term * x / om < tol.series_term_tol) return sum;
            p *= x;
        }
        throw NumericalError("log_tail: series did not converge", sum);
    }
    double head = 0, p = 1;
    for (int k = 1; k < s; ++k) {
        p *= x;
        head += p / k;
    }
    p *= x;
    return (-std::log(om) - head) / p;
}

double log_tail(int s, double x, double om, const Tolerance& tol) {
    if (x == 0) return 0.0;
    return std::pow(x, s) * log_tail_scaled(s, x, om, tol);
}

namespace {
void iso_check(int n, double phi0, double a, double v) {
    if (n < 1) throw DomainError("iso_integral: n must be >= 1");
    if (!(v >= a)) throw DomainError("iso_integral: requires v >= a");
    if (v > a && !(a > phi0)) throw DomainError("iso_integral: singular configuration a <= phi0");
}
}  // namespace

double iso_integral(int n, double phi0, double a, double v, const Tolerance& tol) {
    iso_check(n, phi0, a, v);
    if (v == a) return 0.0;
    double x = (v - a) / (v - phi0);
    double om = (a - phi0) / (v - phi0);
    return log_tail(n, x, om, tol);
}

double iso_integral_mixed(int n, double phi0, double a, double v, double lambda,
                          const Tolerance& tol) {
    iso_check(n, phi0, a, v);
    if (!(lambda > 0 && lambda <= 1)) throw DomainError("iso_integral_mixed: lambda outside (0,1]");
    if (v == a) return 0.0;
    double x = (v - a) / (v - phi0);
    double om = (a - phi0) / (v - phi0);
    return std::pow(x, n) / n + lambda * log_tail(n + 1, x, om, tol);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    auto splitmix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return splitmix(seed ^ splitmix(stream + 0x632be59bd9b4e019ULL));
}

}  // namespace rauc
