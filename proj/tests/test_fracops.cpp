#include <cmath>
#include <doctest.h>

#include <vector>

#include "errors.hpp"
#include "fdesolve.hpp"
#include "fracops.hpp"
#include "mlcore.hpp"

using namespace fracord;

namespace {

// f(t) = t^p sampled on i*h, i = 0..n
std::vector<double> power_samples(double p, double h, int n) {
    std::vector<double> u(n + 1);
    u[0] = p == 0.0 ? 1.0 : 0.0;
    for (int i = 1; i <= n; ++i) u[i] = std::pow(i * h, p);
    return u;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b,
                    size_t lo) {
    double w = 0.0;
    for (size_t i = lo; i < a.size(); ++i)
        w = std::max(w, std::fabs(a[i] - b[i]));
    return w;
}

}  // namespace

TEST_CASE("fractional integral is exact on linear data") {
    // product trapezoid integrates the kernel against the piecewise-linear
    // interpolant exactly, so linear input has no truncation error at all
    double h = 1.0 / 64;
    int n = 128;
    std::vector<double> u(n + 1);
    for (int i = 0; i <= n; ++i) u[i] = 3.0 * i * h;
    auto I = fracops::rl_integral(u, h, 0.7);
    for (int i = 1; i <= n; ++i) {
        double want = 3.0 * mlcore::rgamma_real(2.7) * std::pow(i * h, 1.7);
        CHECK(std::fabs(I[i] - want) <= 1e-14 * want);
    }
}

TEST_CASE("fractional integral converges at second order on t^2.5") {
    double prev = 0.0;
    for (double h : {1.0 / 128, 1.0 / 256}) {
        int n = static_cast<int>(std::llround(2.0 / h));
        auto u = power_samples(2.5, h, n);
        auto I = fracops::rl_integral(u, h, 0.7);
        double worst = 0.0;
        for (int i = 1; i <= n; ++i) {
            double want = std::tgamma(3.5) * mlcore::rgamma_real(4.2) *
                          std::pow(i * h, 3.2);
            worst = std::max(worst, std::fabs(I[i] - want));
        }
        if (prev > 0.0) CHECK(prev / worst >= 3.5);
        prev = worst;
    }
}

TEST_CASE("fractional integrals compose: I^b1 I^b2 = I^(b1+b2)") {
    const std::pair<double, double> pairs[] = {{0.3, 0.4}, {0.5, 0.5}};
    for (auto [b1, b2] : pairs) {
        CAPTURE(b1);
        CAPTURE(b2);
        double prev = 0.0;
        for (double h : {1.0 / 128, 1.0 / 256}) {
            int n = static_cast<int>(std::llround(2.0 / h));
            auto u = power_samples(1.0, h, n);
            auto twice = fracops::rl_integral(fracops::rl_integral(u, h, b1),
                                              h, b2);
            auto direct = fracops::rl_integral(u, h, b1 + b2);
            double worst = max_abs_diff(twice, direct, 0);
            CHECK(worst <= h * h);
            if (prev > 0.0) CHECK(prev / worst >= 2.8);
            prev = worst;
        }
    }
}

TEST_CASE("Caputo derivative is exact on piecewise-linear input") {
    double h = 1.0 / 64;
    int n = 128;
    std::vector<double> u(n + 1);
    for (int i = 0; i <= n; ++i) u[i] = 2.0 * i * h;
    auto d = fracops::caputo_derivative(u, h, 0.6);
    for (int i = 1; i <= n; ++i) {
        double want = 2.0 * mlcore::rgamma_real(1.4) * std::pow(i * h, 0.4);
        CHECK(std::fabs(d[i] - want) <= 1e-14 * want);
    }
}

TEST_CASE("Caputo derivative meets its nominal order on t^2") {
    for (double b : {0.3, 0.7}) {
        CAPTURE(b);
        double prev = 0.0;
        for (double h : {1.0 / 128, 1.0 / 256}) {
            int n = static_cast<int>(std::llround(2.0 / h));
            auto u = power_samples(2.0, h, n);
            auto d = fracops::caputo_derivative(u, h, b);
            double worst = 0.0;
            for (int i = 1; i <= n; ++i) {
                double want = 2.0 * mlcore::rgamma_real(3.0 - b) *
                              std::pow(i * h, 2.0 - b);
                worst = std::max(worst, std::fabs(d[i] - want));
            }
            if (prev > 0.0) {
                double order = std::log2(prev / worst);
                CHECK(std::fabs(order - (2.0 - b)) <= 0.3);
            }
            prev = worst;
        }
    }
}

TEST_CASE("Caputo derivative above order one is exact on t^2") {
    // second differences of a quadratic are exact, and so is the L1 layer
    // that follows them
    double h = 1.0 / 64;
    int n = 128;
    auto u = power_samples(2.0, h, n);
    auto d = fracops::caputo_derivative(u, h, 1.4);
    for (int i = 1; i <= n; ++i) {
        double want = 2.0 * mlcore::rgamma_real(1.6) * std::pow(i * h, 0.6);
        CHECK(std::fabs(d[i] - want) <= 1e-13 * want);
    }
    auto d1 = fracops::caputo_derivative(u, h, 1.0);
    for (int i = 0; i <= n; ++i)
        CHECK(std::fabs(d1[i] - 2.0 * i * h) <= 1e-13);
}

TEST_CASE("Caputo derivative annihilates constants") {
    double h = 1.0 / 64;
    int n = 128;
    std::vector<double> c(n + 1, 7.7);
    for (double b : {0.3, 1.0, 1.5}) {
        CAPTURE(b);
        auto d = fracops::caputo_derivative(c, h, b);
        for (int i = 0; i <= n; ++i) CHECK(std::fabs(d[i]) <= 1e-12);
    }
}

TEST_CASE("Grunwald derivative: power rule order and constant rule") {
    for (double b : {0.5, 1.3}) {
        CAPTURE(b);
        double prev = 0.0;
        for (double h : {1.0 / 256, 1.0 / 512}) {
            int n = static_cast<int>(std::llround(2.0 / h));
            auto u = power_samples(2.0, h, n);
            auto d = fracops::rl_derivative(u, h, b);
            double worst = 0.0;
            for (int i = n / 4; i <= n; ++i) {
                double want = 2.0 * mlcore::rgamma_real(3.0 - b) *
                              std::pow(i * h, 2.0 - b);
                worst = std::max(worst, std::fabs(d[i] - want));
            }
            if (prev > 0.0) {
                double order = std::log2(prev / worst);
                CHECK(order >= 0.7);
                CHECK(order <= 1.3);
            }
            prev = worst;
        }
        // Riemann-Liouville keeps the t^-b ghost of the initial value
        double h = 1.0 / 512;
        int n = 1024;
        std::vector<double> c(n + 1, 3.0);
        auto d = fracops::rl_derivative(c, h, b);
        double worst = 0.0;
        for (int i = n / 4; i <= n; ++i) {
            double want = 3.0 * mlcore::rgamma_real(1.0 - b) *
                          std::pow(i * h, -b);
            worst = std::max(worst, std::fabs(d[i] - want));
        }
        CHECK(worst <= 5e-3);
    }
}

TEST_CASE("sequential composition matches the addition rule on linear data") {
    double prev = 0.0;
    for (double h : {1.0 / 256, 1.0 / 512}) {
        int n = static_cast<int>(std::llround(2.0 / h));
        auto u = power_samples(1.0, h, n);
        auto d = fracops::sequential_derivative(u, h, 0.3, 0.3);
        double worst = 0.0;
        for (int i = n / 8; i <= n; ++i) {
            double want = mlcore::rgamma_real(1.4) * std::pow(i * h, 0.4);
            worst = std::max(worst, std::fabs(d[i] - want));
        }
        CHECK(worst <= 5e-5 * (h <= 1.0 / 512 ? 1.0 : 4.0));
        if (prev > 0.0) CHECK(prev / worst >= 1.6);
        prev = worst;
    }
}

TEST_CASE("sequential and direct forms agree on the two-term solution") {
    // the balanced weights make D^b u vanish at t = 0, which is exactly the
    // condition for the composition to equal the direct 2b derivative
    double h = 1.0 / 512;
    int n = static_cast<int>(std::llround(4.0 / h));
    auto s = fdesolve::solve_two_term_relaxation(1.0, 0.7, 0.4);
    std::vector<double> u(n + 1);
    u[0] = 1.0;
    for (int i = 1; i <= n; ++i) u[i] = fdesolve::eval_u(s, i * h);
    auto direct = fracops::caputo_derivative(u, h, 0.8);
    auto seq = fracops::sequential_derivative(u, h, 0.4, 0.4);
    CHECK(max_abs_diff(direct, seq, static_cast<size_t>(0.5 / h)) <= 1e-4);
}

TEST_CASE("Caputo derivative reproduces the relaxation eigenvalue") {
    double h = 1.0 / 1024;
    int n = static_cast<int>(std::llround(4.0 / h));
    for (double b : {0.35, 0.5, 0.9}) {
        CAPTURE(b);
        auto s = fdesolve::solve_pure_relaxation(-1.0, b);
        std::vector<double> u(n + 1);
        u[0] = 1.0;
        for (int i = 1; i <= n; ++i) u[i] = fdesolve::eval_u(s, i * h);
        auto d = fracops::caputo_derivative(u, h, b);
        double worst = 0.0;
        for (int i = static_cast<int>(std::llround(0.5 / h)); i <= n; ++i)
            worst = std::max(worst,
                             std::fabs(d[i] + u[i]) / std::fabs(u[i]));
        CHECK(worst <= 0.05);  // the headline bound
        CHECK(worst <= 1e-3);  // what the scheme actually delivers
    }
}

TEST_CASE("equation residuals are small and shrink under refinement") {
    struct Row {
        fdesolve::Solution s;
        double t_max, h, bound;
    };
    const Row rows[] = {
        {fdesolve::solve_pure_relaxation(-1.0, 0.5), 4.0, 1.0 / 512, 2e-4},
        {fdesolve::solve_pure_relaxation(-1.0, 1.0), 4.0, 1.0 / 512, 1e-6},
        {fdesolve::solve_damped_oscillation(-2.0, 1.5), 4.0, 1.0 / 512, 2e-4},
        {fdesolve::solve_two_term_relaxation(1.0, 0.7, 0.45), 4.0, 1.0 / 512,
         6e-4},
        {fdesolve::solve_two_rate_density(3.0, 2.0, 1.0, 1.0, 0.5), 2.0,
         1.0 / 512, 0.1},
        {fdesolve::solve_two_rate_density(3.0, 2.0, 1.0, 1.0, 1.0), 2.0,
         1.0 / 512, 1e-2},
    };
    for (const auto& row : rows) {
        CAPTURE(row.bound);
        auto rep = fracops::fde_residual(row.s, row.t_max, row.h);
        CHECK(rep.max_abs <= row.bound);
        CHECK(rep.converges);
        REQUIRE(!rep.t.empty());
        REQUIRE(rep.t.size() == rep.residual.size());
        // report window starts past the excluded head and ends at t_max
        CHECK(rep.t.front() >= 0.05 * row.t_max - 1e-12);
        CHECK(rep.t.back() <= row.t_max + 1e-12);
        double check_max = 0.0;
        for (double r : rep.residual)
            check_max = std::max(check_max, std::fabs(r));
        CHECK(check_max == rep.max_abs);
    }
}

TEST_CASE("wrong-order operator leaves a visible residual") {
    double h = 1.0 / 512;
    int n = static_cast<int>(std::llround(4.0 / h));
    auto s = fdesolve::solve_pure_relaxation(-1.0, 0.5);
    std::vector<double> u(n + 1);
    u[0] = 1.0;
    for (int i = 1; i <= n; ++i) u[i] = fdesolve::eval_u(s, i * h);
    auto right = fracops::caputo_derivative(u, h, 0.5);
    auto wrong = fracops::caputo_derivative(u, h, 0.6);
    double res_right = 0.0, res_wrong = 0.0;
    for (int i = static_cast<int>(std::llround(0.2 / h)); i <= n; ++i) {
        res_right = std::max(res_right, std::fabs(right[i] + u[i]));
        res_wrong = std::max(res_wrong, std::fabs(wrong[i] + u[i]));
    }
    CHECK(res_right <= 2e-4);
    CHECK(res_wrong >= 1e-2);
    CHECK(res_wrong >= 5.0 * res_right);
}

TEST_CASE("operators validate their input") {
    std::vector<double> ok = {0.0, 1.0, 2.0, 3.0};
    std::vector<double> tiny = {0.0, 1.0};
    std::vector<double> bad = {0.0, 1.0, std::nan(""), 3.0};

    CHECK_THROWS_AS(fracops::rl_integral(tiny, 0.1, 0.5), Error);
    CHECK_THROWS_AS(fracops::rl_integral(ok, 0.0, 0.5), Error);
    CHECK_THROWS_AS(fracops::rl_integral(ok, -0.1, 0.5), Error);
    CHECK_THROWS_AS(fracops::rl_integral(ok, 0.1, 0.0), Error);
    CHECK_THROWS_AS(fracops::rl_integral(bad, 0.1, 0.5), Error);

    CHECK_THROWS_AS(fracops::caputo_derivative(ok, 0.1, 0.0), Error);
    CHECK_THROWS_AS(fracops::caputo_derivative(ok, 0.1, 2.0), Error);
    CHECK_THROWS_AS(fracops::caputo_derivative(ok, 0.1, -0.5), Error);

    CHECK_THROWS_AS(fracops::rl_derivative(ok, 0.1, 0.0), Error);
    CHECK_THROWS_AS(fracops::rl_derivative(ok, 0.1, 2.0), Error);

    try {
        fracops::rl_integral(ok, 0.1, 0.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Domain);
    }
    try {
        fracops::rl_integral(tiny, 0.1, 0.5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Grid);
    }

    // residual grid must resolve the window
    auto s = fdesolve::solve_pure_relaxation(-1.0, 0.5);
    CHECK_THROWS_AS(fracops::fde_residual(s, 1.0, 0.25), Error);
    try {
        fracops::fde_residual(s, 1.0, 0.25);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Grid);
    }
}
