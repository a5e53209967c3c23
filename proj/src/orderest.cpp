#include "orderest.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace fracord::orderest {

namespace {

constexpr int kExponentGrid = 200;
constexpr double kExponentLo = 0.05;
constexpr double kExponentHi = 4.0;
constexpr double kVanish = 1e-300;

void check_grid(const std::vector<double>& t, size_t values) {
    if (t.size() != values)
        throw Error(ErrorCode::Grid, "order fit: t and value sizes differ");
    if (t.size() < 5)
        throw Error(ErrorCode::Grid, "order fit: need at least 5 samples");
    for (size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !std::isfinite(t[i]))
            throw Error(ErrorCode::Grid, "order fit: t must be positive");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw Error(ErrorCode::Grid, "order fit: t must be increasing");
    }
}

// Derivative of the quadratic through (x0,u0), (x1,u1), (x2,u2) at x.
double lagrange3_deriv(double x, double x0, double x1, double x2, double u0,
                       double u1, double u2) {
    return u0 * (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2)) +
           u1 * (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2)) +
           u2 * (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
}

}  // namespace

double indicator(double t, double u, double du) {
    if (!(t > 0.0) || !std::isfinite(t) || !std::isfinite(u) ||
        !std::isfinite(du))
        throw Error(ErrorCode::Domain, "indicator: nonfinite input");
    if (std::fabs(u) < kVanish)
        throw Error(ErrorCode::Signal, "indicator: u vanishes");
    return -t * du / u;
}

double order_from_limit(double eta_inf, double offset) {
    if (!std::isfinite(eta_inf) || !std::isfinite(offset))
        throw Error(ErrorCode::Domain, "order_from_limit: nonfinite input");
    return eta_inf + offset;
}

FitResult extrapolate_limit(const std::vector<double>& t,
                            const std::vector<double>& eta, double offset) {
    check_grid(t, eta.size());
    for (double e : eta)
        if (!std::isfinite(e))
            throw Error(ErrorCode::Domain, "order fit: nonfinite eta sample");

    size_t n = t.size();
    size_t k = (n + 1) / 2;  // tail half, at least 3 by the n >= 5 gate
    size_t lo = n - k;

    double emin = eta[lo], emax = eta[lo];
    for (size_t i = lo; i < n; ++i) {
        emin = std::min(emin, eta[i]);
        emax = std::max(emax, eta[i]);
    }
    double spread = emax - emin;

    // a machine-flat tail has already converged; rounding jitter carries no
    // power-law shape, so don't ask the fit to explain it
    if (spread <= 1e-10 * std::max(1.0, std::fabs(emin) + std::fabs(emax))) {
        double mean = 0.0;
        for (size_t i = lo; i < n; ++i) mean += eta[i];
        mean /= static_cast<double>(k);
        return {mean + offset, kExponentHi, spread};
    }

    bool found = false;
    double best_rms = 0.0, best_a = 0.0, best_p = 0.0;
    double lstep = std::log(kExponentHi / kExponentLo) / (kExponentGrid - 1);
    for (int ip = 0; ip < kExponentGrid; ++ip) {
        double p = kExponentLo * std::exp(lstep * ip);
        // least squares for eta = A + B w, w = t^{-p}, on the tail
        double sw = 0, sww = 0, se = 0, swe = 0;
        for (size_t i = lo; i < n; ++i) {
            double w = std::pow(t[i], -p);
            sw += w;
            sww += w * w;
            se += eta[i];
            swe += w * eta[i];
        }
        double kk = static_cast<double>(k);
        double det = kk * sww - sw * sw;
        if (!(det > 1e-280 * std::max(1.0, kk * sww)))
            continue;  // all w collapsed; t^{-p} indistinguishable from const
        double a = (sww * se - sw * swe) / det;
        double b = (kk * swe - sw * se) / det;
        double rss = 0.0;
        for (size_t i = lo; i < n; ++i) {
            double r = eta[i] - a - b * std::pow(t[i], -p);
            rss += r * r;
        }
        double rms = std::sqrt(rss / kk);
        if (!found || rms < best_rms) {
            found = true;
            best_rms = rms;
            best_a = a;
            best_p = p;
        }
    }
    if (!found)
        throw Error(ErrorCode::Fit, "order fit: no usable decay exponent");
    if (best_rms > 0.1 * spread)
        throw Error(ErrorCode::Fit,
                    "order fit: tail is not a power-law approach");
    return {best_a + offset, best_p, best_rms};
}

FitResult indicator_series_analytic(const fdesolve::Solution& s,
                                    const std::vector<double>& t) {
    check_grid(t, t.size());
    std::vector<double> eta(t.size());
    for (size_t i = 0; i < t.size(); ++i)
        eta[i] = indicator(t[i], eval_u(s, t[i]), eval_du(s, t[i]));
    return extrapolate_limit(t, eta, s.eta_offset);
}

FitResult indicator_series_sampled(const std::vector<double>& t,
                                   const std::vector<double>& u,
                                   double offset) {
    check_grid(t, u.size());
    size_t n = t.size();
    for (size_t i = 0; i < n; ++i) {
        if (std::fabs(u[i]) < kVanish)
            throw Error(ErrorCode::Signal, "order fit: u vanishes on the grid");
        if (i > 0 && std::signbit(u[i]) != std::signbit(u[i - 1]))
            throw Error(ErrorCode::Signal, "order fit: u changes sign");
    }
    // eta = -d log|u| / d log t: differencing in log-log space is exact on
    // power laws, so grid spacing never biases the recovered order
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = std::log(t[i]);
        y[i] = std::log(std::fabs(u[i]));
    }
    std::vector<double> eta(n);
    for (size_t i = 0; i < n; ++i) {
        size_t j = std::min(std::max(i, size_t{1}), n - 2);  // stencil center
        eta[i] = -lagrange3_deriv(x[i], x[j - 1], x[j], x[j + 1], y[j - 1],
                                  y[j], y[j + 1]);
    }
    return extrapolate_limit(t, eta, offset);
}

}  // namespace fracord::orderest
