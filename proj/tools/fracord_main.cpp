// fracord command-line front end.  Talks to the library exclusively through
// the C interface.
//
// Exit codes: 0 success, 1 runtime failure (including a verify run whose
// residual does not converge), 2 usage errors.

#include <cmath>
#include <cstdio>
#include <cstring>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracord/fracord.h"

namespace {

using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// all numeric output funnels through here: %.17g round-trips doubles and
// never localizes the decimal separator
std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Failure {
    int status;
    std::string message;
};

void check(int status) {
    if (status != FRACORD_OK) throw Failure{status, fracord_last_error()};
}

struct Grid {
    double lo = 1.0, hi = 1e5;
    int n = 200;
};

// "lo:hi:n", log-spaced
Grid parse_grid(const std::string& text) {
    Grid g;
    char extra;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.n,
                    &extra) != 3 ||
        !(g.lo > 0.0) || !(g.hi > g.lo) || g.n < 2)
        throw CLI::ValidationError(
            "grid", "expected LO:HI:N with 0 < LO < HI and N >= 2");
    return g;
}

std::vector<double> log_points(const Grid& g) {
    std::vector<double> t(g.n);
    for (int i = 0; i < g.n; ++i)
        t[i] = g.lo * std::pow(g.hi / g.lo, i / (g.n - 1.0));
    return t;
}

struct SolutionDeleter {
    void operator()(fracord_solution* s) const { fracord_solution_free(s); }
};
using SolutionPtr = std::unique_ptr<fracord_solution, SolutionDeleter>;

// problem-class selection shared by solve/estimate/verify
struct ClassSpec {
    std::string name = "relaxation";
    double beta = 0.5;
    double rate = -1.0;            // relaxation, oscillation
    double mu = 1.0, gamma = 0.7;  // two-term
    double a1 = 3.0, a0 = 2.0, c1 = 1.0, c2 = 1.0;  // two-rate
};

void add_class_options(CLI::App* cmd, ClassSpec* spec) {
    cmd->add_option("--class", spec->name,
                    "problem class: two-rate-density|thm1, "
                    "two-term-relaxation|thm2, damped-oscillation|thm3, "
                    "relaxation|thm4")
        ->default_str(spec->name);
    cmd->add_option("--beta", spec->beta, "fractional order")
        ->default_str(fmt(spec->beta));
    cmd->add_option("--rate", spec->rate,
                    "decay rate (relaxation, damped-oscillation)")
        ->default_str(fmt(spec->rate));
    cmd->add_option("--mu", spec->mu, "two-term damping")
        ->default_str(fmt(spec->mu));
    cmd->add_option("--gamma", spec->gamma, "two-term stiffness")
        ->default_str(fmt(spec->gamma));
    cmd->add_option("--a1", spec->a1, "two-rate sum coefficient")
        ->default_str(fmt(spec->a1));
    cmd->add_option("--a0", spec->a0, "two-rate product coefficient")
        ->default_str(fmt(spec->a0));
    cmd->add_option("--c1", spec->c1, "two-rate first weight")
        ->default_str(fmt(spec->c1));
    cmd->add_option("--c2", spec->c2, "two-rate second weight")
        ->default_str(fmt(spec->c2));
}

SolutionPtr make_solution(const ClassSpec& spec) {
    fracord_solution* raw = nullptr;
    const std::string& c = spec.name;
    if (c == "two-rate-density" || c == "thm1")
        check(fracord_solve_two_rate_density(spec.a1, spec.a0, spec.c1,
                                             spec.c2, spec.beta, &raw));
    else if (c == "two-term-relaxation" || c == "thm2")
        check(fracord_solve_two_term_relaxation(spec.mu, spec.gamma, spec.beta,
                                                &raw));
    else if (c == "damped-oscillation" || c == "thm3")
        check(fracord_solve_damped_oscillation(spec.rate, spec.beta, &raw));
    else if (c == "relaxation" || c == "thm4")
        check(fracord_solve_pure_relaxation(spec.rate, spec.beta, &raw));
    else
        throw CLI::ValidationError("--class", "unknown class: " + c);
    return SolutionPtr(raw);
}

json class_json(const ClassSpec& spec) {
    const std::string& c = spec.name;
    json j{{"class", c}, {"beta", spec.beta}};
    if (c == "two-rate-density" || c == "thm1") {
        j["a1"] = spec.a1;
        j["a0"] = spec.a0;
        j["c1"] = spec.c1;
        j["c2"] = spec.c2;
    } else if (c == "two-term-relaxation" || c == "thm2") {
        j["mu"] = spec.mu;
        j["gamma"] = spec.gamma;
    } else {
        j["rate"] = spec.rate;
    }
    return j;
}

// every writer goes through an explicit stream so stdout and --out behave
// identically; LF line ends on every platform
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw Failure{FRACORD_ERR_GRID, "cannot open " + path};
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

void write_meta(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Failure{FRACORD_ERR_GRID, "cannot open " + path};
    f << j.dump(2) << "\n";
}

// CSV of t,value rows; a leading header row is skipped if non-numeric
std::vector<std::pair<double, double>> read_samples(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Failure{FRACORD_ERR_GRID, "cannot open " + path};
    std::vector<std::pair<double, double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double t, v;
        if (ss >> t >> v) {
            rows.emplace_back(t, v);
        } else if (!first) {
            throw Failure{FRACORD_ERR_GRID, "unparseable row: " + line};
        }
        first = false;
    }
    return rows;
}

int cmd_eval(double alpha, double beta, double z, bool derivative) {
    fracord_eval_result r;
    if (derivative)
        check(fracord_ml_derivative(alpha, beta, z, &r));
    else
        check(fracord_ml(alpha, beta, z, &r));
    std::cout << "value,abs_error_estimate,regime,degraded\n"
              << fmt(r.value) << ',' << fmt(r.abs_error_estimate) << ','
              << fracord_regime_name(r.regime) << ',' << r.degraded << "\n";
    return 0;
}

int cmd_solve(const ClassSpec& spec, const Grid& grid, const std::string& out,
              const std::string& meta) {
    SolutionPtr s = make_solution(spec);
    Output output(out);
    output.stream() << "t,value\n";
    for (double t : log_points(grid)) {
        double u = 0.0;
        check(fracord_solution_eval(s.get(), t, &u, nullptr));
        output.stream() << fmt(t) << ',' << fmt(u) << "\n";
    }
    json j{{"command", "solve"},
           {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"n", grid.n}}},
           {"problem", class_json(spec)},
           {"output", out.empty() ? json() : json(out)},
           {"version", fracord_version()}};
    write_meta(meta, j);
    return 0;
}

int cmd_estimate(const ClassSpec& spec, bool have_class,
                 const std::string& input, double offset, bool have_offset,
                 const Grid& grid, const std::string& out,
                 const std::string& meta) {
    fracord_order_fit fit;
    json source;
    if (have_class) {
        SolutionPtr s = make_solution(spec);
        auto t = log_points(grid);
        check(fracord_indicator_series_analytic(s.get(), t.data(), t.size(),
                                                &fit));
        source = class_json(spec);
    } else {
        auto rows = read_samples(input);
        std::vector<double> t, u;
        t.reserve(rows.size());
        u.reserve(rows.size());
        for (auto& [tt, uu] : rows) {
            t.push_back(tt);
            u.push_back(uu);
        }
        check(fracord_indicator_series_sampled(t.data(), u.data(), t.size(),
                                               have_offset ? offset : 0.0,
                                               &fit));
        source = json{{"input", input},
                      {"offset", have_offset ? offset : 0.0}};
    }
    Output output(out);
    output.stream() << "beta_hat,decay_exponent,residual\n"
                    << fmt(fit.beta_hat) << ',' << fmt(fit.decay_exponent)
                    << ',' << fmt(fit.residual) << "\n";
    json j{{"command", "estimate"},
           {"source", source},
           {"beta_hat", fit.beta_hat},
           {"decay_exponent", fit.decay_exponent},
           {"residual", fit.residual},
           {"version", fracord_version()}};
    if (have_class)
        j["grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"n", grid.n}};
    write_meta(meta, j);
    return 0;
}

int cmd_verify(const ClassSpec& spec, double t_max, double h,
               const std::string& meta) {
    SolutionPtr s = make_solution(spec);
    fracord_residual* raw = nullptr;
    check(fracord_residual_compute(s.get(), t_max, h, &raw));
    std::unique_ptr<fracord_residual, void (*)(fracord_residual*)> r(
        raw, fracord_residual_free);
    double max_abs = 0.0;
    int converges = 0;
    check(fracord_residual_max_abs(r.get(), &max_abs));
    check(fracord_residual_converges(r.get(), &converges));
    std::cout << "max_abs_residual,converges\n"
              << fmt(max_abs) << ',' << converges << "\n";
    json j{{"command", "verify"},
           {"problem", class_json(spec)},
           {"t_max", t_max},
           {"h", h},
           {"max_abs_residual", max_abs},
           {"converges", converges == 1},
           {"version", fracord_version()}};
    write_meta(meta, j);
    return converges == 1 ? 0 : kExitFailure;
}

// figure grids: indicator curves whose tails expose the equation order
int cmd_reproduce(const std::string& figure, const std::string& out,
                  const std::string& meta) {
    const int n = 400;
    const double lo = 0.1, hi = 1e4;
    Output output(out);
    std::vector<double> betas;
    json problem;
    if (figure == "fig1") {
        betas = {0.35, 0.40, 0.45};
        output.stream() << "t,eta_beta0.35,eta_beta0.40,eta_beta0.45\n";
        problem = {{"class", "two-term-relaxation"}, {"mu", 1.0},
                   {"gamma", 0.7}, {"betas", betas}, {"column", "eta"}};
    } else if (figure == "fig2") {
        betas = {1.2, 1.5, 1.7};
        output.stream() << "t,val_beta1.2,val_beta1.5,val_beta1.7\n";
        problem = {{"class", "damped-oscillation"}, {"rate", -2.0},
                   {"betas", betas}, {"column", "1 - t u'/u"}};
    } else {
        throw CLI::ValidationError("--figure", "expected fig1 or fig2");
    }

    std::vector<SolutionPtr> sols;
    for (double b : betas) {
        fracord_solution* raw = nullptr;
        if (figure == "fig1")
            check(fracord_solve_two_term_relaxation(1.0, 0.7, b, &raw));
        else
            check(fracord_solve_damped_oscillation(-2.0, b, &raw));
        sols.emplace_back(raw);
    }

    for (int i = 0; i < n; ++i) {
        double t = lo * std::pow(hi / lo, i / (n - 1.0));
        output.stream() << fmt(t);
        for (auto& s : sols) {
            double u = 0.0, du = 0.0, eta = 0.0;
            check(fracord_solution_eval(s.get(), t, &u, &du));
            int st = fracord_indicator(t, u, du, &eta);
            double cell;
            if (st == FRACORD_ERR_SIGNAL) {
                cell = std::nan("");  // u crosses zero; indicator undefined
            } else {
                check(st);
                cell = figure == "fig1" ? eta : 1.0 + eta;
            }
            output.stream() << ',' << fmt(cell);
        }
        output.stream() << "\n";
    }
    json j{{"command", "reproduce"},
           {"figure", figure},
           {"grid", {{"lo", lo}, {"hi", hi}, {"n", n}}},
           {"problem", problem},
           {"version", fracord_version()}};
    write_meta(meta, j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional relaxation models: closed-form solutions, "
                 "equation residuals, and order recovery"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fracord_version());

    // eval
    double alpha = 1.0, beta = 1.0, z = 0.0;
    bool derivative = false;
    auto* eval = app.add_subcommand(
        "eval", "evaluate the two-parameter Mittag-Leffler function");
    eval->add_option("--alpha", alpha, "first parameter, > 0")->required();
    eval->add_option("--beta", beta, "second parameter")->required();
    eval->add_option("-z,--z", z, "argument")->required();
    eval->add_flag("--derivative", derivative, "evaluate d/dz instead");

    // common pieces
    ClassSpec solve_spec, est_spec, verify_spec;
    std::string grid_text, out_path, meta_path;

    auto* solve = app.add_subcommand(
        "solve", "tabulate a closed-form solution on a log grid");
    add_class_options(solve, &solve_spec);
    solve->add_option("--grid", grid_text, "log grid LO:HI:N")
        ->default_str("1:1e5:200");
    solve->add_option("--out", out_path, "output CSV path (default stdout)");
    solve->add_option("--meta", meta_path, "write a JSON run description");

    std::string est_grid_text, est_out, est_meta, est_input;
    double est_offset = 0.0;
    auto* estimate = app.add_subcommand(
        "estimate", "recover the equation order from a solution tail");
    ClassSpec* est_spec_ptr = &est_spec;
    add_class_options(estimate, est_spec_ptr);
    estimate->add_option("--input", est_input,
                         "CSV of t,value samples (instead of --class)");
    estimate->add_option("--offset", est_offset,
                         "indicator offset for --input mode");
    estimate->add_option("--grid", est_grid_text, "log grid LO:HI:N")
        ->default_str("1e2:1e6:100");
    estimate->add_option("--out", est_out, "output CSV path (default stdout)");
    estimate->add_option("--meta", est_meta, "write a JSON run description");

    double t_max = 4.0, step = 1.0 / 512;
    std::string verify_meta;
    auto* verify = app.add_subcommand(
        "verify", "apply the defining equation to the closed form and "
                  "report the residual (exit 1 unless it converges)");
    add_class_options(verify, &verify_spec);
    verify->add_option("--tmax", t_max, "grid end")->default_str("4");
    verify->add_option("--step", step, "grid step")->default_str("0.001953125");
    verify->add_option("--meta", verify_meta, "write a JSON run description");

    std::string figure, rep_out, rep_meta;
    auto* reproduce = app.add_subcommand(
        "reproduce", "regenerate a reference figure dataset");
    reproduce->add_option("--figure", figure, "fig1 or fig2")->required();
    reproduce->add_option("--out", rep_out,
                          "output CSV path (default stdout)");
    reproduce->add_option("--meta", rep_meta,
                          "write a JSON run description");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(alpha, beta, z, derivative);
        if (solve->parsed()) {
            Grid g = grid_text.empty() ? Grid{} : parse_grid(grid_text);
            return cmd_solve(solve_spec, g, out_path, meta_path);
        }
        if (estimate->parsed()) {
            Grid g{1e2, 1e6, 100};
            if (!est_grid_text.empty()) g = parse_grid(est_grid_text);
            bool have_class = estimate->count("--class") > 0 ||
                              est_input.empty();
            if (!est_input.empty() && estimate->count("--class") > 0) {
                std::cerr << "error: --input and --class are exclusive\n";
                return kExitUsage;
            }
            return cmd_estimate(est_spec, have_class, est_input, est_offset,
                                estimate->count("--offset") > 0, g, est_out,
                                est_meta);
        }
        if (verify->parsed())
            return cmd_verify(verify_spec, t_max, step, verify_meta);
        if (reproduce->parsed())
            return cmd_reproduce(figure, rep_out, rep_meta);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << " (status " << f.status
                  << ")\n";
        return kExitFailure;
    }
    return kExitUsage;
}
