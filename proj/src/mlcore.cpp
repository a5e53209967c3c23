#include "mlcore.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "errors.hpp"

namespace fracord::mlcore {

namespace {

constexpr double kPoleEps = 1e-12;
constexpr int kMaxSeriesTerms = 10000;
constexpr double kDegradedRel = 1e-9;

// (14 ln 10): at the switch the series term peak is e^{14 ln 10}, i.e. the
// summation cancels through 14 of the ~16 available decimal digits.
constexpr double kSwitchScale = 32.23619130191664;

// sin(pi x) with exact argument reduction.  std::sin(M_PI * x) loses all
// accuracy near integer x because M_PI * x rounds before the sine.
double sin_pi(double x) {
    double n = std::round(x);
    double r = x - n;  // exact; |r| <= 0.5
    double s = std::sin(M_PI * r);
    if (std::fmod(n, 2.0) != 0.0) s = -s;
    return s;
}

bool near_nonpos_int(double x) {
    double n = std::round(x);
    return n <= 0.0 && std::fabs(x - n) <= kPoleEps;
}

struct MpfrVal {
    mpfr_t v;
    explicit MpfrVal(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    ~MpfrVal() { mpfr_clear(v); }
    MpfrVal(const MpfrVal&) = delete;
    MpfrVal& operator=(const MpfrVal&) = delete;
    operator mpfr_ptr() { return v; }
    operator mpfr_srcptr() const { return v; }
};

// Exact test for Gamma poles in the term sequence: is alpha*k + beta a
// nonpositive integer?  alpha*k is a 53-bit double times a small integer
// and the final add stays well inside 192 bits, so nothing rounds and the
// integer test is exact.  A double-precision alpha*k + beta would round
// and could miss (or invent) a pole.
bool term_pole(double alpha, double beta, long k, mpfr_ptr scratch) {
    mpfr_set_d(scratch, alpha, MPFR_RNDN);
    mpfr_mul_si(scratch, scratch, k, MPFR_RNDN);
    mpfr_add_d(scratch, scratch, beta, MPFR_RNDN);
    return mpfr_integer_p(scratch) && mpfr_sgn(scratch) <= 0;
}

EvalResult finish(double value, double abs_err, Regime regime) {
    bool degraded =
        !(abs_err <= kDegradedRel * std::max(std::fabs(value), DBL_MIN));
    return {value, abs_err, regime, degraded};
}

// Plain compensated summation of the defining series.  Safe when the term
// peak e^{|z|^{1/alpha}} stays within a few digits of the result scale,
// i.e. z >= 0 (all-positive tail) or |z|^{1/alpha} <= 4.
EvalResult series_double(double alpha, double beta, double z) {
    MpfrVal scratch(192);
    double s = 0.0, comp = 0.0, sumabs = 0.0;
    double zk = 1.0;
    long n = 0;
    int small_run = 0;
    double t = 0.0;
    bool converged = false;
    for (long k = 0; k < kMaxSeriesTerms; ++k) {
        if (!std::isfinite(zk) || !std::isfinite(s))
            throw Error(ErrorCode::Overflow, "ml: series exceeds double range");
        if (term_pole(alpha, beta, k, scratch)) {
            zk *= z;
            continue;  // exact zero term; must not count toward convergence
        }
        t = rgamma_real(alpha * static_cast<double>(k) + beta) * zk;
        double tmp = s + t;
        if (std::fabs(s) >= std::fabs(t))
            comp += (s - tmp) + t;
        else
            comp += (t - tmp) + s;
        s = tmp;
        sumabs += std::fabs(t);
        ++n;
        if (k > 0 && std::fabs(t) <= 0.5 * DBL_EPSILON * std::fabs(s + comp)) {
            if (++small_run >= 2) {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        zk *= z;
    }
    if (!converged)
        throw Error(ErrorCode::NoConvergence,
                    "ml: series did not converge within 10000 terms");
    double value = s + comp;
    double abs_err = std::fabs(t) +
                     static_cast<double>(n) * DBL_EPSILON * sumabs;
    return finish(value, abs_err, Regime::Series);
}

// Long-double Neumaier summation covers the mildly cancelled band
// 2 < m <= 11 on the negative axis: e^{11} * eps_ld keeps the rounding
// floor near 1e-12 absolute, and it costs the same as the double path
// instead of a high-precision pass.  Gamma arguments are formed in long
// double; their rounding is amplified by the e^{m} peak like everything
// else in this regime.
EvalResult series_ld(double alpha, double beta, double z) {
    MpfrVal scratch(192);
    long double s = 0.0L, comp = 0.0L, zk = 1.0L, sumabs = 0.0L, t = 0.0L;
    const long double la = alpha, lb = beta, lz = z;
    long n = 0;
    int small_run = 0;
    bool converged = false;
    for (long k = 0; k < kMaxSeriesTerms; ++k) {
        if (term_pole(alpha, beta, k, scratch)) {
            zk *= lz;
            continue;
        }
        t = zk / tgammal(la * static_cast<long double>(k) + lb);
        long double tmp = s + t;
        if (fabsl(s) >= fabsl(t))
            comp += (s - tmp) + t;
        else
            comp += (t - tmp) + s;
        s = tmp;
        sumabs += fabsl(t);
        ++n;
        if (k > 0 && fabsl(t) <= 0.5L * LDBL_EPSILON * fabsl(s + comp)) {
            if (++small_run >= 2) {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        zk *= lz;
    }
    if (!converged)
        throw Error(ErrorCode::NoConvergence,
                    "ml: series did not converge within 10000 terms");
    double value = static_cast<double>(s + comp);
    double abs_err = static_cast<double>(
        fabsl(t) + static_cast<long double>(n) * LDBL_EPSILON * sumabs);
    abs_err += 0.5 * DBL_EPSILON * std::fabs(value);
    return finish(value, abs_err, Regime::Series);
}

// Extended-precision summation for the cancellation-heavy range z < 0,
// m = |z|^{1/alpha} > 11.  Working precision carries the full e^{m} peak
// (1.4427 bits per unit of m) plus 96 guard bits, so the rounding floor
// lands at ~2^{-96} relative to the algebraic-sized result.
EvalResult series_mpfr(double alpha, double beta, double z, double m) {
    long prec = 96 + static_cast<long>(std::ceil(1.4427 * m)) + 1;
    prec = std::min(prec, 65536L);

    MpfrVal scratch(192), s(prec), zk(prec), term(prec), garg(192), zz(prec),
        sumabs(prec);
    mpfr_set_d(zz, z, MPFR_RNDN);
    mpfr_set_zero(s, 1);
    mpfr_set_zero(sumabs, 1);
    mpfr_set_d(zk, 1.0, MPFR_RNDN);

    long n = 0;
    int small_run = 0;
    mpfr_exp_t peak_exp = mpfr_get_emin();
    mpfr_exp_t last_exp = mpfr_get_emin();
    bool converged = false;
    for (long k = 0; k < kMaxSeriesTerms; ++k) {
        if (term_pole(alpha, beta, k, scratch)) {
            mpfr_mul(zk, zk, zz, MPFR_RNDN);
            continue;
        }
        mpfr_set_d(garg, alpha, MPFR_RNDN);
        mpfr_mul_si(garg, garg, k, MPFR_RNDN);
        mpfr_add_d(garg, garg, beta, MPFR_RNDN);
        mpfr_gamma(term, garg, MPFR_RNDN);
        mpfr_div(term, zk, term, MPFR_RNDN);
        mpfr_add(s, s, term, MPFR_RNDN);
        mpfr_abs(term, term, MPFR_RNDN);
        mpfr_add(sumabs, sumabs, term, MPFR_RNDN);
        ++n;
        if (mpfr_zero_p(term.v)) {
            last_exp = mpfr_get_emin();
        } else {
            last_exp = mpfr_get_exp(term.v);
            peak_exp = std::max(peak_exp, last_exp);
        }
        // Terms decay superexponentially past the peak; once one falls
        // prec bits below it the remaining tail is negligible relative to
        // the worst-case cancelled result (which sits ~1.4427*m bits,
        // never more, below the peak).
        if (k > 0 && last_exp < peak_exp - (prec - 8)) {
            if (++small_run >= 2) {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        mpfr_mul(zk, zk, zz, MPFR_RNDN);
    }
    if (!converged)
        throw Error(ErrorCode::NoConvergence,
                    "ml: series did not converge within 10000 terms");

    double value = mpfr_get_d(s, MPFR_RNDN);
    double err_log2 = std::log2(static_cast<double>(n)) + 1.0 -
                      static_cast<double>(prec) +
                      static_cast<double>(mpfr_get_exp(sumabs.v));
    err_log2 = std::max(err_log2, static_cast<double>(last_exp));
    double abs_err = std::exp2(std::min(err_log2, 1024.0));
    return finish(value, abs_err, Regime::Series);
}

EvalResult series_eval(double alpha, double beta, double z) {
    if (z == 0.0)
        return {rgamma_real(beta), 0.0, Regime::Series, false};
    double m = std::pow(std::fabs(z), 1.0 / alpha);
    // terms peak near k = m/alpha; past the cap the sum cannot have
    // settled, so don't burn 10000 high-precision terms proving it
    if (m / alpha > 0.98 * kMaxSeriesTerms)
        throw Error(ErrorCode::NoConvergence,
                    "ml: series needs more than 10000 terms");
    // e^m is the cancellation amplification on the negative axis; past
    // e^2 ~ 7x hand off to extended precision rather than eat the ulps
    if (z < 0.0 && m > 11.0) return series_mpfr(alpha, beta, z, m);
    if (z < 0.0 && m > 2.0) return series_ld(alpha, beta, z);
    return series_double(alpha, beta, z);
}

// log |z^{-k} / Gamma(beta - k alpha)| with the sin(pi x) factor of the
// reflection stripped: the smooth envelope of the asymptotic tail terms.
// The raw magnitudes seesaw with the sine (vanishing outright at Gamma
// poles), so they cannot drive a truncation decision.
double tail_envelope(double alpha, double beta, double logaz, int k) {
    double g = beta - static_cast<double>(k) * alpha;
    double e = g >= 0.5 ? -std::lgamma(g)
                        : std::lgamma(1.0 - g) - std::log(M_PI);
    return e - static_cast<double>(k) * logaz;
}

// -sum_{k>=1} z^{-k} / Gamma(beta - k alpha), the algebraic tail shared by
// both asymptotic regimes.  Optimal truncation: stop where the term
// envelope bottoms out (near k = m/alpha, with the envelope minimum at
// e^{-m}), which is within the cap for any |z| past the switch radius.
double asym_tail(double alpha, double beta, double z, int nterms,
                 double* err_out) {
    int cap = nterms > 0 ? nterms : 400;
    bool greedy = nterms <= 0;
    double logaz = std::log(std::fabs(z));
    double s = 0.0;
    double zk = 1.0;
    double env_last = HUGE_VAL;
    double err = 0.0;
    int k = 1;
    for (; k <= cap; ++k) {
        double env = tail_envelope(alpha, beta, logaz, k);
        if (greedy && env >= env_last) break;
        env_last = env;
        zk /= z;
        if (zk == 0.0) break;  // |z|^{-k} underflowed; the tail is below 1e-307
        s -= rgamma_real(beta - static_cast<double>(k) * alpha) * zk;
    }
    err = std::exp(std::min(tail_envelope(alpha, beta, logaz, k), 700.0));
    *err_out = err;
    return s;
}

EvalResult asym_negative(double alpha, double beta, double z, int nterms) {
    double err = 0.0;
    double s = asym_tail(alpha, beta, z, nterms, &err);
    // Exponentially small contribution of the conjugate pair of saddle
    // points rotated off the negative axis.  For alpha <= 1 the pair sits
    // outside the principal sheet and does not contribute; at alpha = 1 it
    // collapses onto the axis with half weight from each side.
    double m = std::pow(-z, 1.0 / alpha);
    if (alpha > 1.0 + kPoleEps) {
        double th = M_PI / alpha;
        double amp =
            (2.0 / alpha) * std::pow(m, 1.0 - beta) * std::exp(m * std::cos(th));
        if (amp != 0.0)
            s += amp * std::cos(M_PI * (1.0 - beta) / alpha + m * std::sin(th));
        err += std::fabs(amp) * 4.0 * DBL_EPSILON * std::max(1.0, m);
    } else if (std::fabs(alpha - 1.0) <= kPoleEps) {
        s += std::cos(M_PI * (1.0 - beta)) * std::pow(-z, 1.0 - beta) *
             std::exp(z);
    }
    return finish(s, err, Regime::AsymptoticNegative);
}

EvalResult exp_positive(double alpha, double beta, double z) {
    double m = std::pow(z, 1.0 / alpha);
    double log_lead =
        m + (1.0 - beta) / alpha * std::log(z) - std::log(alpha);
    if (log_lead > 709.0)
        throw Error(ErrorCode::Overflow,
                    "ml: exponential regime exceeds double range");
    double lead;
    if (m <= 700.0)
        lead = std::exp(m) * std::pow(z, (1.0 - beta) / alpha) / alpha;
    else
        lead = std::exp(log_lead);
    double err = 0.0;
    double tail = asym_tail(alpha, beta, z, 0, &err);
    err += lead * (m + 2.0) * DBL_EPSILON;
    return finish(lead + tail, err, Regime::ExponentialPositive);
}

void validate(double alpha, double beta, double z) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(z))
        throw Error(ErrorCode::Domain, "ml: nonfinite argument");
    if (!(alpha > 0.0))
        throw Error(ErrorCode::Domain, "ml: alpha must be positive");
}

EvalResult closed_form(double value, double scale) {
    if (std::isinf(value))
        throw Error(ErrorCode::Overflow, "ml: result exceeds double range");
    return {value, 4.0 * DBL_EPSILON * std::fabs(scale), Regime::Series, false};
}

}  // namespace

double gamma_real(double x) {
    if (!std::isfinite(x))
        throw Error(ErrorCode::Domain, "gamma: nonfinite argument");
    if (near_nonpos_int(x))
        throw Error(ErrorCode::Domain, "gamma: pole at nonpositive integer");
    double v;
    if (x >= 0.5) {
        v = std::tgamma(x);
    } else if (x > -170.0) {
        v = M_PI / (sin_pi(x) * std::tgamma(1.0 - x));
    } else {
        // Gamma(1-x) overflows; |Gamma(x)| = pi / |sin(pi x)| / Gamma(1-x)
        // is subnormal or zero out here and the log form keeps the sign.
        double mag = std::exp(std::log(M_PI) - std::lgamma(1.0 - x));
        double s = sin_pi(x);
        v = (s < 0.0 ? -mag : mag) / std::fabs(s);
    }
    if (std::isinf(v))
        throw Error(ErrorCode::Overflow, "gamma: result exceeds double range");
    return v;
}

double rgamma_real(double x) {
    if (!std::isfinite(x))
        throw Error(ErrorCode::Domain, "rgamma: nonfinite argument");
    double n = std::round(x);
    if (x == n && n <= 0.0) return 0.0;  // exact zero at the poles
    if (x >= 0.5) return 1.0 / std::tgamma(x);  // overflow collapses to +0
    double s = sin_pi(x);
    if (x > -170.0) return s * std::tgamma(1.0 - x) / M_PI;
    // 1/Gamma grows without bound down here; saturate with the right sign.
    double mag = std::lgamma(1.0 - x) + std::log(std::fabs(s)) - std::log(M_PI);
    double v = std::exp(mag);
    return s < 0.0 ? -v : v;
}

double switch_radius(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(ErrorCode::Domain, "switch_radius: alpha must be positive");
    return std::pow(kSwitchScale, alpha);
}

EvalResult ml(double alpha, double beta, double z) {
    validate(alpha, beta, z);
    if (z == 0.0) return {rgamma_real(beta), 0.0, Regime::Series, false};
    if (alpha == 1.0 && beta == 1.0) return closed_form(std::exp(z), std::exp(z));
    if (alpha == 1.0 && beta == 2.0)
        return closed_form(std::expm1(z) / z, std::expm1(z) / z);
    if (alpha == 2.0 && beta == 1.0) {
        double w = std::sqrt(std::fabs(z));
        return closed_form(z < 0.0 ? std::cos(w) : std::cosh(w),
                           z < 0.0 ? 1.0 : std::cosh(w));
    }
    if (alpha == 2.0 && beta == 2.0) {
        double w = std::sqrt(std::fabs(z));
        return closed_form(z < 0.0 ? std::sin(w) / w : std::sinh(w) / w,
                           z < 0.0 ? 1.0 : std::sinh(w) / w);
    }
    if (std::fabs(z) <= switch_radius(alpha)) return series_eval(alpha, beta, z);
    if (alpha >= 2.0)
        throw Error(ErrorCode::Unsupported,
                    "ml: alpha >= 2 beyond the series radius");
    if (z < 0.0) return asym_negative(alpha, beta, z, 0);
    return exp_positive(alpha, beta, z);
}

EvalResult ml_series(double alpha, double beta, double z) {
    validate(alpha, beta, z);
    return series_eval(alpha, beta, z);
}

EvalResult ml_asymptotic_negative(double alpha, double beta, double z,
                                  int nterms) {
    validate(alpha, beta, z);
    if (!(z < 0.0))
        throw Error(ErrorCode::Domain,
                    "ml_asymptotic_negative: z must be negative");
    if (alpha >= 2.0)
        throw Error(ErrorCode::Unsupported,
                    "ml_asymptotic_negative: requires alpha < 2");
    return asym_negative(alpha, beta, z, nterms);
}

EvalResult ml_derivative(double alpha, double beta, double z) {
    validate(alpha, beta, z);
    if (z == 0.0) return {rgamma_real(alpha + beta), 0.0, Regime::Series, false};
    // alpha z E' = E_{alpha,beta-1} - (beta-1) E_{alpha,beta}
    EvalResult e1 = ml(alpha, beta - 1.0, z);
    EvalResult e2 = ml(alpha, beta, z);
    double denom = alpha * z;
    double num = e1.value - (beta - 1.0) * e2.value;
    double err = (e1.abs_error_estimate +
                  std::fabs(beta - 1.0) * e2.abs_error_estimate +
                  2.0 * DBL_EPSILON * (std::fabs(e1.value) +
                                       std::fabs((beta - 1.0) * e2.value))) /
                 std::fabs(denom);
    EvalResult out = finish(num / denom, err, e2.regime);
    out.degraded = out.degraded || e1.degraded || e2.degraded;
    return out;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Series: return "series";
        case Regime::AsymptoticNegative: return "asymptotic-negative";
        case Regime::ExponentialPositive: return "exponential-positive";
    }
    return "unknown";
}

}  // namespace fracord::mlcore
