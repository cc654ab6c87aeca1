// Command-line front end.  Talks to the library only through the C API.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rauc/rauc.h"

using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kFail = 2, kNumeric = 3 };

struct CallError {
    rauc_status status;
    std::string what;
};

void check(rauc_status s) {
    if (s != RAUC_OK) throw CallError{s, rauc_last_error()};
}

struct Owned {
    char* p = nullptr;
    ~Owned() { rauc_string_free(p); }
};

struct Sol {
    rauc_solution* p = nullptr;
    ~Sol() { rauc_solution_free(p); }
};

rauc_tolerance g_tol;

void tol_from_env() {
    rauc_tolerance_default(&g_tol);
    if (const char* e = std::getenv("RAUC_TOL")) {
        char* end = nullptr;
        double t = std::strtod(e, &end);
        if (end == e || *end || !(t > 0)) throw CallError{RAUC_E_DOMAIN, "RAUC_TOL must be a positive number"};
        g_tol.quad_abs_tol = t;
        g_tol.root_abs_tol = t;
    }
}

struct InstanceOpts {
    std::string cls = "all";
    int n = 2;
    double a = 0, b = 1, lambda = 1;
};

void add_instance(CLI::App* c, InstanceOpts& o, bool with_class = true) {
    if (with_class) c->add_option("--class", o.cls, "all | std | spa-rand | spa-det | spa-no-reserve")->capture_default_str();
    c->add_option("--n", o.n, "number of bidders")->capture_default_str();
    c->add_option("--a", o.a, "support lower bound")->capture_default_str();
    c->add_option("--b", o.b, "support upper bound")->capture_default_str();
    c->add_option("--lambda", o.lambda, "regret weight in (0,1]")->capture_default_str();
}

rauc_instance inst_of(const InstanceOpts& o) { return {o.a, o.b, o.n, o.lambda}; }

rauc_class class_of(const std::string& s) {
    rauc_class c;
    check(rauc_parse_class(s.c_str(), &c));
    return c;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw CallError{RAUC_E_IO, "cannot open " + path};
    f << text;
    if (!f) throw CallError{RAUC_E_IO, "write failed: " + path};
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimax lambda-regret auctions on a known support [a,b]."};
    app.footer(
        "Environment:\n"
        "  RAUC_TOL   absolute quadrature and root tolerance override (default 1e-11 / 1e-12)\n"
        "Exit codes: 0 ok/PASS, 1 usage error, 2 verification FAIL, 3 numerical failure");
    app.require_subcommand(1);

    int cn = 2;
    double clam = 1;
    auto* constants = app.add_subcommand("constants", "regime thresholds k_l, k_h, k_h'");
    constants->add_option("--n", cn)->required();
    constants->add_option("--lambda", clam)->required();

    InstanceOpts so;
    std::string solve_out;
    auto* solve = app.add_subcommand("solve", "saddle solution as JSON");
    add_instance(solve, so);
    solve->add_option("--json", solve_out, "output file (default stdout)");

    int which_table = 2;
    std::vector<int> table_n;
    std::string table_out;
    auto* table = app.add_subcommand("table", "maximin ratio tables as CSV");
    table->add_option("--which", which_table, "2 (n x a/b) or 3 (class x a/b)")->check(CLI::IsMember({2, 3}));
    table->add_option("--n", table_n, "rows for table 2, or n for table 3");
    table->add_option("--out", table_out, "output CSV (default stdout)");

    InstanceOpts vo;
    rauc_verify_options vopt;
    rauc_verify_options_default(&vopt);
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "check the saddle inequalities");
    add_instance(verify, vo);
    verify->add_option("--grid", vopt.grid)->capture_default_str();
    verify->add_option("--perturbations", vopt.perturbations)->capture_default_str();
    verify->add_option("--samples", vopt.mc_samples, "Monte Carlo samples (0 = skip)")->capture_default_str();
    verify->add_option("--seed", vopt.seed)->capture_default_str();
    verify->add_option("--json", verify_out, "report file (default stdout)");

    InstanceOpts co;
    std::string which_curve = "unified", curve_out;
    std::size_t curve_grid = 201;
    bool at_ratio = false;
    auto* curves = app.add_subcommand("curves", "curve data as CSV");
    curves->add_option("--which", which_curve)
        ->check(CLI::IsMember({"phi", "psi", "unified", "normalized", "spa-rand-phi", "genspa-phi", "worst-case"}));
    add_instance(curves, co, false);
    curves->add_option("--grid", curve_grid)->capture_default_str();
    curves->add_option("--out", curve_out, "output CSV (default stdout)");
    curves->add_flag("--at-ratio", at_ratio, "use the maximin ratio of the curve's class as lambda");

    InstanceOpts mo;
    std::size_t samples = 1000000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo regret of the saddle pair");
    add_instance(simulate, mo);
    simulate->add_option("--samples", samples)->capture_default_str();
    simulate->add_option("--seed", seed)->capture_default_str();
    simulate->add_option("--threads", threads, "0 = hardware concurrency")->capture_default_str();

    double pa = 0, pb = 1, plam = 1;
    std::size_t pgrid = 400, vgrid = 400, iters = 200000;
    auto* oracle = app.add_subcommand("oracle", "independent discretized solvers");
    oracle->require_subcommand(1);
    auto* pricing = oracle->add_subcommand("pricing", "single-buyer pricing game by regret matching");
    pricing->add_option("--a", pa)->capture_default_str();
    pricing->add_option("--b", pb)->capture_default_str();
    pricing->add_option("--lambda", plam)->capture_default_str();
    pricing->add_option("--price-grid", pgrid)->capture_default_str();
    pricing->add_option("--value-grid", vgrid)->capture_default_str();
    pricing->add_option("--iters", iters)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        tol_from_env();
        if (*constants) {
            double kl, kh, khp;
            check(rauc_regime_constants(cn, clam, &g_tol, &kl, &kh, &khp));
            emit(json{{"n", cn}, {"lambda", clam}, {"k_l", kl}, {"k_h", kh}, {"k_h_prime", khp}}.dump(2), "");
        } else if (*solve) {
            auto in = inst_of(so);
            Sol s;
            check(rauc_solve(class_of(so.cls), &in, &g_tol, &s.p));
            Owned j;
            check(rauc_solution_json(s.p, &j.p));
            emit(j.p, solve_out);
        } else if (*table) {
            Owned csv;
            check(rauc_table_csv(which_table, table_n.empty() ? nullptr : table_n.data(), table_n.size(), &g_tol,
                                 &csv.p));
            emit(csv.p, table_out);
        } else if (*verify) {
            auto in = inst_of(vo);
            Sol s;
            check(rauc_solve(class_of(vo.cls), &in, &g_tol, &s.p));
            Owned rep;
            int pass = 0;
            check(rauc_verify(s.p, &vopt, &g_tol, &rep.p, &pass));
            emit(rep.p, verify_out);
            std::cerr << (pass ? "PASS" : "FAIL") << '\n';
            return pass ? kOk : kFail;
        } else if (*curves) {
            const char* cls = "all";
            const char* field = which_curve.c_str();
            if (which_curve == "spa-rand-phi") cls = "spa-rand", field = "g_u";
            if (which_curve == "genspa-phi") cls = "std", field = "genspa_phi";
            if (which_curve == "worst-case") field = "F";
            auto in = inst_of(co);
            if (at_ratio) {
                if (!(co.b > 0)) throw CallError{RAUC_E_DOMAIN, "--b must be positive"};
                rauc_regime rg;
                check(rauc_maximin_ratio(class_of(cls), co.n, co.a / co.b, &g_tol, &in.lambda, &rg));
            }
            Sol s;
            check(rauc_solve(class_of(cls), &in, &g_tol, &s.p));
            if (curve_grid < 2) throw CallError{RAUC_E_DOMAIN, "--grid must be >= 2"};
            std::ostringstream os;
            if (which_curve == "normalized") {
                std::vector<double> t(curve_grid), y(curve_grid);
                check(rauc_solution_normalized(s.p, curve_grid, t.data(), y.data()));
                os << "t,psi\n";
                for (std::size_t i = 0; i < curve_grid; ++i) os << num(t[i]) << ',' << num(y[i]) << '\n';
            } else {
                // phi and psi live on [a, v*] and [v*, b]; find v* from the solution
                double lo = co.a, hi = co.b;
                if (which_curve == "phi" || which_curve == "psi") {
                    Owned j;
                    check(rauc_solution_json(s.p, &j.p));
                    auto sol = json::parse(j.p);
                    double vs = sol["mechanism"]["v_star"].get<double>();
                    (which_curve == "phi" ? hi : lo) = vs;
                    if (hi <= lo) throw CallError{RAUC_E_DOMAIN, which_curve + " is empty in this regime"};
                }
                std::vector<double> v(curve_grid), y(curve_grid);
                for (std::size_t i = 0; i < curve_grid; ++i)
                    v[i] = i + 1 == curve_grid ? hi : lo + (hi - lo) * static_cast<double>(i) / (curve_grid - 1);
                check(rauc_solution_eval(s.p, field, v.data(), v.size(), y.data()));
                os << "v,cdf\n";
                for (std::size_t i = 0; i < curve_grid; ++i) os << num(v[i]) << ',' << num(y[i]) << '\n';
            }
            emit(os.str(), curve_out);
        } else if (*simulate) {
            auto in = inst_of(mo);
            Sol s;
            check(rauc_solve(class_of(mo.cls), &in, &g_tol, &s.p));
            double est, se, value;
            check(rauc_simulate(s.p, samples, seed, threads, &est, &se));
            check(rauc_solution_value(s.p, &value, nullptr));
            emit(json{{"estimate", est}, {"std_error", se}, {"samples", samples}, {"seed", seed}, {"value", value}}
                     .dump(2),
                 "");
        } else if (*pricing) {
            double value, gap;
            check(rauc_pricing_game(pa, pb, plam, pgrid, vgrid, iters, &value, &gap));
            emit(json{{"value", value}, {"gap", gap}, {"price_grid", pgrid}, {"value_grid", vgrid}, {"iters", iters}}
                     .dump(2),
                 "");
        }
    } catch (const CallError& e) {
        std::cerr << "error: " << rauc_status_string(e.status) << ": " << e.what << '\n';
        switch (e.status) {
            case RAUC_E_DOMAIN:
            case RAUC_E_MISMATCH:
            case RAUC_E_NULL: return kUsage;
            case RAUC_E_IO: return kNumeric;
            default: return kNumeric;
        }
    }
    return kOk;
}
