#include "fracops.hpp"

#include <cmath>

#include "errors.hpp"
#include "mlcore.hpp"

namespace fracord::fracops {

namespace {

void check_series(const std::vector<double>& u, double h) {
    if (u.size() < 3)
        throw Error(ErrorCode::Grid, "fracops: need at least 3 samples");
    if (!(h > 0.0) || !std::isfinite(h))
        throw Error(ErrorCode::Grid, "fracops: h must be positive");
    for (double v : u)
        if (!std::isfinite(v))
            throw Error(ErrorCode::Domain, "fracops: nonfinite sample");
}

// First derivative by second-order differences, one-sided at the ends.
std::vector<double> diff1(const std::vector<double>& u, double h) {
    size_t n = u.size();
    std::vector<double> d(n);
    d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    for (size_t i = 1; i + 1 < n; ++i) d[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    return d;
}

// L1 weights for 0 < beta < 1.
std::vector<double> caputo_l1(const std::vector<double>& u, double h,
                              double beta) {
    size_t n = u.size();
    std::vector<double> b(n ? n - 1 : 0);
    for (size_t j = 0; j < b.size(); ++j)
        b[j] = std::pow(static_cast<double>(j + 1), 1.0 - beta) -
               std::pow(static_cast<double>(j), 1.0 - beta);
    double scale =
        std::pow(h, -beta) * mlcore::rgamma_real(2.0 - beta);
    std::vector<double> d(n, 0.0);
    for (size_t i = 1; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < i; ++j)
            acc += b[j] * (u[i - j] - u[i - j - 1]);
        d[i] = scale * acc;
    }
    return d;
}

}  // namespace

std::vector<double> rl_integral(const std::vector<double>& u, double h,
                                double beta) {
    check_series(u, h);
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw Error(ErrorCode::Domain, "rl_integral: beta must be positive");
    size_t n = u.size();
    double scale = std::pow(h, beta) * mlcore::rgamma_real(beta + 2.0);
    std::vector<double> out(n, 0.0);
    for (size_t i = 1; i < n; ++i) {
        double fi = static_cast<double>(i);
        double acc =
            (std::pow(fi - 1.0, beta + 1.0) -
             (fi - 1.0 - beta) * std::pow(fi, beta)) *
            u[0];
        for (size_t j = 1; j < i; ++j) {
            double d = fi - static_cast<double>(j);
            acc += (std::pow(d + 1.0, beta + 1.0) - 2.0 * std::pow(d, beta + 1.0) +
                    std::pow(d - 1.0, beta + 1.0)) *
                   u[j];
        }
        acc += u[i];
        out[i] = scale * acc;
    }
    return out;
}

std::vector<double> caputo_derivative(const std::vector<double>& u, double h,
                                      double beta) {
    check_series(u, h);
    if (!std::isfinite(beta) || !(beta > 0.0) || beta >= 2.0)
        throw Error(ErrorCode::Domain, "caputo_derivative: beta in (0, 2)");
    if (beta == 1.0) return diff1(u, h);
    if (beta < 1.0) return caputo_l1(u, h, beta);
    return caputo_l1(diff1(u, h), h, beta - 1.0);
}

std::vector<double> rl_derivative(const std::vector<double>& u, double h,
                                  double beta) {
    check_series(u, h);
    if (!std::isfinite(beta) || !(beta > 0.0) || beta >= 2.0)
        throw Error(ErrorCode::Domain, "rl_derivative: beta in (0, 2)");
    size_t n = u.size();
    std::vector<double> w(n);
    w[0] = 1.0;
    for (size_t k = 1; k < n; ++k)
        w[k] = w[k - 1] * (1.0 - (beta + 1.0) / static_cast<double>(k));
    double scale = std::pow(h, -beta);
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t k = 0; k <= i; ++k) acc += w[k] * u[i - k];
        out[i] = scale * acc;
    }
    return out;
}

std::vector<double> sequential_derivative(const std::vector<double>& u,
                                          double h, double beta1,
                                          double beta2) {
    // stage one lands exactly 0 at the origin (L1 with i = 0), which is the
    // Caputo value of the inner derivative there for these solution classes
    return caputo_derivative(caputo_derivative(u, h, beta1), h, beta2);
}

namespace {

struct Pass {
    std::vector<double> t, r;
    double max_abs;
};

// tanh-sinh nodes/weights for integrals over (0, 1); endpoint-singular
// integrands (anything integrable) converge to roundoff at this density.
// The left nodes are computed as 1/(1+e^{-2 sh}) rather than through tanh,
// which saturates once x is within an ulp of 0: an x^{p-1} singularity
// needs nodes far below 1e-17 before its truncated mass x_min^p is
// negligible for every p in (0, 1).
struct DeRule {
    std::vector<double> x, w;
    DeRule() {
        const double tau = 0.09, p2 = M_PI / 2.0;
        for (int j = -60; j <= 60; ++j) {
            double t = tau * j;
            double sh = p2 * std::sinh(t);
            double e = std::exp(-2.0 * std::fabs(sh));
            double xx = j <= 0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
            double ww = 2.0 * tau * p2 * std::cosh(t) * e /
                        ((1.0 + e) * (1.0 + e));
            if (xx <= 0.0 || xx >= 1.0 || ww < 1e-320) continue;
            x.push_back(xx);
            w.push_back(ww);
        }
    }
};

// (1/Gamma(power_gamma)) * integral_0^{t0} (t - s)^{kpow} f(s) ds for each
// t, with f sampled once on the tanh-sinh nodes.  This is the exact head
// that relocating an operator's lower terminal from 0 to t0 leaves behind.
std::vector<double> head_correction(const std::vector<double>& t, double t0,
                                    double kpow, double power_gamma,
                                    const std::vector<double>& fnodes,
                                    const DeRule& de) {
    double rg = mlcore::rgamma_real(power_gamma);
    std::vector<double> out(t.size(), 0.0);
    if (rg == 0.0) return out;  // integer-order case: no head at all
    for (size_t i = 0; i < t.size(); ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < de.x.size(); ++j)
            acc += de.w[j] * std::pow(t[i] - t0 * de.x[j], kpow) * fnodes[j];
        out[i] = rg * t0 * acc;
    }
    return out;
}

Pass residual_pass(const fdesolve::Solution& s, double t_max, double h) {
    using fdesolve::ProblemClass;

    // The two singular-at-0 classes get their operators based at a fixed
    // t0 > 0 where the solution is smooth (so L1/Grunwald converge), and
    // the exact history on (0, t0) comes back as a quadrature of the
    // closed form: D^v_0 u = D^v_{t0} u + (1/Gamma(-v)) int_0^{t0}
    // (t-s)^{-v-1} u(s) ds, and likewise through u'' for Caputo.
    bool based = s.cls == ProblemClass::TwoRateDensity ||
                 s.cls == ProblemClass::DampedOscillation;
    double t0 = based ? 0.025 * t_max : 0.0;
    // last node must not pass t_max; the 1e-9 guard absorbs the rounding of
    // an exactly divisible span
    size_t n = static_cast<size_t>((t_max - t0) / h + 1e-9);
    if (n < 20) throw Error(ErrorCode::Grid, "fde_residual: grid too coarse");

    std::vector<double> t(n + 1), u(n + 1);
    for (size_t i = 0; i <= n; ++i) {
        t[i] = t0 + static_cast<double>(i) * h;
        u[i] = eval_u(s, t[i]);
    }

    DeRule de;
    std::vector<double> res(n + 1);
    switch (s.cls) {
        case ProblemClass::PureRelaxation: {
            std::vector<double> d = caputo_derivative(u, h, s.beta);
            for (size_t i = 0; i <= n; ++i) res[i] = d[i] - s.p1 * u[i];
            break;
        }
        case ProblemClass::DampedOscillation: {
            // Caputo head through u''; d/dt [t^{b-1} E_{B,b}(r t^B)] =
            // t^{b-2} E_{B,b-1} gives u'' = t^{-2}E_{B,-1} + t^{-1}E_{B,0}
            std::vector<double> upp(de.x.size());
            for (size_t j = 0; j < de.x.size(); ++j) {
                double sj = t0 * de.x[j];
                double arg = s.p1 * std::pow(sj, s.beta);
                upp[j] = mlcore::ml(s.beta, -1.0, arg).value / (sj * sj) +
                         mlcore::ml(s.beta, 0.0, arg).value / sj;
            }
            std::vector<double> head =
                head_correction(t, t0, 1.0 - s.beta, 2.0 - s.beta, upp, de);
            std::vector<double> d = caputo_derivative(u, h, s.beta);
            for (size_t i = 0; i <= n; ++i)
                res[i] = d[i] + head[i] - s.p1 * u[i];
            break;
        }
        case ProblemClass::TwoTermRelaxation: {
            // the direct 2*beta derivative matches the stagewise one here
            // because the rate-weighted coefficients cancel the t^{beta}
            // head of u (c1 r1 + c2 r2 = 0)
            std::vector<double> d2 = caputo_derivative(u, h, 2.0 * s.beta);
            std::vector<double> d1 = caputo_derivative(u, h, s.beta);
            for (size_t i = 0; i <= n; ++i)
                res[i] = d2[i] + 2.0 * s.p1 * d1[i] + s.p2 * u[i];
            break;
        }
        case ProblemClass::TwoRateDensity: {
            // the equation is sequential: D^{2B} means D^B (D^B u).  The
            // direct order-2B derivative differs by t^{-B-1}/Gamma(-B) per
            // eigenterm and would not vanish on the solution.  Each stage's
            // own head comes from the closed form; stage one is itself an
            // eigenfunction sum, D^B [t^{B-1}E_{B,B}(l t^B)] = l (same).
            // u and v = D^B u share their E_{B,B} factors term by term, so
            // evaluate both in one sweep
            auto uv = [&](double sv, double* uo, double* vo) {
                double ua = 0.0, va = 0.0;
                for (const fdesolve::SolutionTerm& tm : s.u_terms) {
                    double e = std::pow(sv, tm.power) *
                               mlcore::ml(tm.ml_alpha, tm.ml_beta,
                                          tm.rate * std::pow(sv, tm.ml_alpha))
                                   .value;
                    ua += tm.coefficient * e;
                    va += tm.coefficient * tm.rate * e;
                }
                *uo = ua;
                *vo = va;
            };
            std::vector<double> unodes(de.x.size()), vnodes(de.x.size());
            for (size_t j = 0; j < de.x.size(); ++j)
                uv(t0 * de.x[j], &unodes[j], &vnodes[j]);
            std::vector<double> headu = head_correction(
                t, t0, -s.beta - 1.0, -s.beta, unodes, de);
            std::vector<double> headv = head_correction(
                t, t0, -s.beta - 1.0, -s.beta, vnodes, de);
            // stage two acts on closed-form samples of D^B u, not on stage
            // one's grid output: the Grunwald boundary layer near t0 would
            // otherwise smear O(1) noise through the second convolution
            std::vector<double> v(n + 1);
            for (size_t i = 0; i <= n; ++i) uv(t[i], &u[i], &v[i]);
            std::vector<double> d1 = rl_derivative(u, h, s.beta);
            std::vector<double> d2 = rl_derivative(v, h, s.beta);
            for (size_t i = 0; i <= n; ++i)
                res[i] = d2[i] + headv[i] +
                         s.p1 * (d1[i] + headu[i]) + s.p2 * u[i];
            break;
        }
    }

    double cut = std::max(10.0 * h, 0.05 * t_max);
    Pass out;
    out.max_abs = 0.0;
    for (size_t i = 0; i <= n; ++i) {
        if (t[i] < cut) continue;
        out.t.push_back(t[i]);
        out.r.push_back(res[i]);
        out.max_abs = std::max(out.max_abs, std::fabs(res[i]));
    }
    if (out.t.size() < 5)
        throw Error(ErrorCode::Grid, "fde_residual: report window is empty");
    return out;
}

}  // namespace

ResidualReport fde_residual(const fdesolve::Solution& s, double t_max,
                            double h) {
    if (!(h > 0.0) || !(t_max > 0.0) || !std::isfinite(h) ||
        !std::isfinite(t_max))
        throw Error(ErrorCode::Grid, "fde_residual: bad grid");
    Pass coarse = residual_pass(s, t_max, h);
    Pass fine = residual_pass(s, t_max, 0.5 * h);
    ResidualReport rep;
    rep.t = std::move(coarse.t);
    rep.residual = std::move(coarse.r);
    rep.max_abs = coarse.max_abs;
    rep.converges = fine.max_abs == 0.0 ||
                    coarse.max_abs / fine.max_abs >= 1.5;
    return rep;
}

}  // namespace fracord::fracops
