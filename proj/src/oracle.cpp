#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mechanisms.hpp"

namespace rauc {

namespace {

std::vector<double> grid_points(double a, double b, std::size_t m) {
    if (m == 1) return {b};
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = std::min(b, a + (b - a) * static_cast<double>(i) / (m - 1));
    x.back() = b;
    return x;
}

void rm_plus_strategy(const std::vector<double>& q, std::vector<double>& s) {
    double tot = 0;
    for (double v : q) tot += v;
    if (tot <= 0) {
        std::fill(s.begin(), s.end(), 1.0 / s.size());
        return;
    }
    for (std::size_t i = 0; i < q.size(); ++i) s[i] = q[i] / tot;
}

}  // namespace

PricingGameResult pricing_game_value(double a, double b, double lambda, std::size_t price_grid,
                                     std::size_t value_grid, std::size_t iters) {
    ProblemInstance{a, b, 1, lambda}.validate();
    if (price_grid < 1 || value_grid < 1) throw DomainError("pricing_game_value: empty grid");
    if (iters < 1) throw DomainError("pricing_game_value: iters >= 1");
    const auto P = grid_points(a, b, price_grid);
    const auto V = grid_points(a, b, value_grid);
    const std::size_t np = P.size(), nv = V.size();

    // Payoffs go through prefix sums over sorted grids: O(np + nv) per step.
    auto seller_losses = [&](const std::vector<double>& y, std::vector<double>& out) {
        // out[j] = sum_v y_v (lambda v - p_j [v >= p_j])
        double ev = 0;
        for (std::size_t i = 0; i < nv; ++i) ev += y[i] * V[i];
        double tail = 0;
        std::size_t i = nv;
        for (std::size_t j = np; j-- > 0;) {
            while (i > 0 && V[i - 1] >= P[j]) tail += y[--i];
            out[j] = lambda * ev - P[j] * tail;
        }
    };
    auto nature_gains = [&](const std::vector<double>& x, std::vector<double>& out) {
        // out[i] = lambda v_i - sum_{p <= v_i} x_p p
        double paid = 0;
        std::size_t j = 0;
        for (std::size_t i = 0; i < nv; ++i) {
            while (j < np && P[j] <= V[i]) paid += x[j] * P[j], ++j;
            out[i] = lambda * V[i] - paid;
        }
    };

    std::vector<double> qx(np, 0), qy(nv, 0), x(np), y(nv), xs(np, 0), ys(nv, 0), us(np), un(nv);
    rm_plus_strategy(qx, x);
    rm_plus_strategy(qy, y);
    PricingGameResult res;
    double wsum = 0;
    for (std::size_t t = 1; t <= iters; ++t) {
        seller_losses(y, us);
        double ex = 0;
        for (std::size_t j = 0; j < np; ++j) ex += x[j] * us[j];
        for (std::size_t j = 0; j < np; ++j) qx[j] = std::max(0.0, qx[j] + ex - us[j]);
        rm_plus_strategy(qx, x);

        nature_gains(x, un);
        double ey = 0;
        for (std::size_t i = 0; i < nv; ++i) ey += y[i] * un[i];
        for (std::size_t i = 0; i < nv; ++i) qy[i] = std::max(0.0, qy[i] + un[i] - ey);
        rm_plus_strategy(qy, y);

        double w = static_cast<double>(t);
        wsum += w;
        for (std::size_t j = 0; j < np; ++j) xs[j] += w * x[j];
        for (std::size_t i = 0; i < nv; ++i) ys[i] += w * y[i];
        res.iterations = t;

        if (t % 256 == 0 || t == iters) {
            std::vector<double> xa(np), ya(nv);
            for (std::size_t j = 0; j < np; ++j) xa[j] = xs[j] / wsum;
            for (std::size_t i = 0; i < nv; ++i) ya[i] = ys[i] / wsum;
            seller_losses(ya, us);
            nature_gains(xa, un);
            res.lower = *std::min_element(us.begin(), us.end());
            res.upper = *std::max_element(un.begin(), un.end());
            res.gap = res.upper - res.lower;
            if (res.gap <= 1e-12 * b) break;
        }
    }
    res.value = 0.5 * (res.lower + res.upper);
    return res;
}

double empirical_mechanism_regret(const GuGdMechanism& mech, const PiecewiseCdf& F, const ProblemInstance& inst,
                                  std::size_t grid) {
    inst.validate();
    const int n = inst.n;
    if (grid < 2) throw DomainError("empirical_mechanism_regret: grid >= 2");
    if (n * std::log(static_cast<double>(grid)) > 4 * std::log(40.0) + 1e-9)
        throw DomainError("empirical_mechanism_regret: enumeration limit (grid^n > 40^4)");
    const auto x = grid_points(inst.a, inst.b, grid);
    std::vector<double> w(grid);
    double prev = 0;
    for (std::size_t i = 0; i < grid; ++i) {
        double Fi = i + 1 == grid ? 1.0 : F(x[i]);
        w[i] = std::max(0.0, Fi - prev);
        prev = std::max(prev, Fi);
    }

    std::vector<std::size_t> idx(n, 0);
    std::vector<double> vals(n);
    double total = 0;
    for (;;) {
        double p = 1;
        for (int j = 0; j < n && p > 0; ++j) p *= w[idx[j]];
        if (p > 0) {
            double vmax = 0;
            for (int j = 0; j < n; ++j) vals[j] = x[idx[j]], vmax = std::max(vmax, vals[j]);
            auto out = allocate_and_pay(mech, vals, inst);
            total += p * (inst.lambda * vmax - out.revenue());
        }
        int j = 0;
        while (j < n && ++idx[j] == grid) idx[j++] = 0;
        if (j == n) break;
    }
    return total;
}

}  // namespace rauc
