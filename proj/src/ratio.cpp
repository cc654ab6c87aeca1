#include "ratio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <thread>

#include "mechanisms.hpp"
#include "saddle.hpp"

namespace rauc {

Regime classify_regime(MechanismClass cls, int n, double k, double lambda, const Tolerance& qt) {
    switch (cls) {
        case MechanismClass::SpaNoReserve: return Regime::High;
        case MechanismClass::SpaDet: {
            auto d = optimal_spa_det(ProblemInstance{k, 1.0, n, lambda});
            return d.r_star > k ? Regime::Low : Regime::High;
        }
        default: break;
    }
    auto rc = regime_constants(n, lambda, qt);
    if (k <= rc.k_l) return Regime::Low;
    if (cls == MechanismClass::Std) return n == 1 ? Regime::Moderate : Regime::High;
    if (cls == MechanismClass::SpaRand && n >= 2) return k >= rc.k_h_prime ? Regime::High : Regime::Moderate;
    return k >= rc.k_h ? Regime::High : Regime::Moderate;
}

RatioResult maximin_ratio(MechanismClass cls, int n, double k, double tol, const Tolerance& qt) {
    if (n < 1) throw DomainError("maximin_ratio: n >= 1");
    if (!(k >= 0 && k < 1)) throw DomainError("maximin_ratio: k in [0,1)");
    RatioResult out;
    if (k == 0) {
        out.lambda_star = 0;
        out.regime = Regime::Low;
        return out;
    }
    auto value = [&](double lam) { return minimax_value(cls, ProblemInstance{k, 1.0, n, lam}, qt); };
    const double lo = 1e-9;
    double v1 = value(1.0);
    if (v1 < 0) throw NumericalError("maximin_ratio: negative regret at lambda = 1", v1);
    Tolerance rt = qt;
    rt.root_abs_tol = std::min(qt.root_abs_tol, tol * 1e-2);
    double lam = v1 == 0 ? 1.0 : find_root(value, lo, 1.0, rt);
    out.lambda_star = lam;
    out.residual = value(lam);
    out.regime = classify_regime(cls, n, k, lam, qt);
    if (std::abs(out.residual) > tol) {
        // tighten by plain bisection on the remaining bracket
        double l = std::max(lo, lam - 1e-9), h = std::min(1.0, lam + 1e-9);
        for (int i = 0; i < 200 && std::abs(out.residual) > tol; ++i) {
            double m = 0.5 * (l + h);
            double vm = value(m);
            if (vm > 0) h = m; else l = m;
            out.lambda_star = m;
            out.residual = vm;
        }
    }
    return out;
}

NeverPureSpaReport check_never_pure_spa(const std::vector<int>& n_values, const std::vector<double>& k_grid,
                                        const Tolerance& qt) {
    if (n_values.empty() || k_grid.empty()) throw DomainError("check_never_pure_spa: empty grid");
    NeverPureSpaReport rep;
    rep.min_margin = INFINITY;
    for (int n : n_values) {
        for (double k : k_grid) {
            auto r = maximin_ratio(MechanismClass::All, n, k, 1e-10, qt);
            double kl = regime_constants(n, r.lambda_star, qt).k_l;
            double margin = k - kl;
            rep.min_margin = std::min(rep.min_margin, margin);
            ++rep.checked;
            if (margin < -1e-9 && !rep.first_violation) {
                rep.pass = false;
                rep.first_violation = NeverPureSpaReport::Violation{n, k, r.lambda_star, kl};
            }
        }
    }
    return rep;
}

double pure_pool_onset(int n, const Tolerance& qt) {
    if (n < 2) throw DomainError("pure_pool_onset: needs n >= 2");
    auto g = [&](double k) {
        double lam = maximin_ratio(MechanismClass::All, n, k, 1e-12, qt).lambda_star;
        return k - regime_constants(n, lam, qt).k_h;
    };
    return find_root(g, 1e-6, 0.9, qt);
}

std::vector<std::pair<double, double>> normalized_threshold_cdf(const SaddleSolution& sol, std::size_t grid) {
    if (sol.regime != Regime::High || !sol.mechanism || sol.mechanism->v_star != sol.instance.a)
        throw DomainError("normalized_threshold_cdf: solution is not in the pooling regime");
    if (grid < 2) throw DomainError("normalized_threshold_cdf: grid >= 2");
    auto mx = gugd_to_mixture(*sol.mechanism);
    const double a = sol.instance.a, b = sol.instance.b;
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < grid; ++i) {
        double t = static_cast<double>(i) / (grid - 1);
        double v = i + 1 == grid ? b : a + t * (b - a);
        out.emplace_back(t, std::clamp(mx.psi(v), 0.0, 1.0));
    }
    return out;
}

const std::vector<double>& table2_ratios() {
    static const std::vector<double> k{1e-4, 0.01, 0.05, 0.10, 0.20, 0.25, 0.30, 0.50, 0.75, 0.99};
    return k;
}

const std::vector<double>& table3_ratios() {
    static const std::vector<double> k{0.10, 0.20, 0.25, 0.30, 0.50, 0.75, 0.99};
    return k;
}

namespace {

template <class Cell>
std::vector<std::vector<double>> fill_parallel(std::size_t rows, std::size_t cols, Cell cell) {
    std::vector<std::vector<double>> out(rows, std::vector<double>(cols));
    const std::size_t total = rows * cols;
    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), total));
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < total; i += workers) out[i / cols][i % cols] = cell(i / cols, i % cols);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace

RatioTable ratio_table_by_n(const std::vector<int>& n_values, const std::vector<double>& k_values,
                            const Tolerance& qt) {
    RatioTable t;
    t.row_label = "n";
    for (int n : n_values) t.rows.push_back(std::to_string(n));
    t.cols = k_values;
    t.cells = fill_parallel(n_values.size(), k_values.size(), [&](std::size_t r, std::size_t c) {
        return maximin_ratio(MechanismClass::All, n_values[r], k_values[c], 1e-10, qt).lambda_star;
    });
    return t;
}

RatioTable ratio_table_by_class(int n, const std::vector<MechanismClass>& classes,
                                const std::vector<double>& k_values, const Tolerance& qt) {
    RatioTable t;
    t.row_label = "class";
    for (auto c : classes) t.rows.push_back(to_string(c));
    t.cols = k_values;
    t.cells = fill_parallel(classes.size(), k_values.size(), [&](std::size_t r, std::size_t c) {
        return maximin_ratio(classes[r], n, k_values[c], 1e-10, qt).lambda_star;
    });
    return t;
}

std::string RatioTable::to_csv() const {
    std::string s = row_label + ",a_over_b,ratio,ratio_4dp\n";
    char buf[128];
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::snprintf(buf, sizeof buf, ",%.6g,%.12g,%.4f\n", cols[c], cells[r][c], cells[r][c]);
            s += rows[r] + buf;
        }
    return s;
}

}  // namespace rauc
