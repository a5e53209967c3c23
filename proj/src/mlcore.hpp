#pragma once

namespace fracord::mlcore {

enum class Regime {
    Series = 0,
    AsymptoticNegative = 1,
    ExponentialPositive = 2,
};

struct EvalResult {
    double value;
    double abs_error_estimate;
    Regime regime;
    bool degraded;  // estimated relative error worse than ~1e-9
};

// Gamma on the real line.  gamma_real throws Domain within 1e-12 of a
// nonpositive integer and Overflow past the double range.  rgamma_real is
// total: exactly 0 at the poles, saturating to +-inf where 1/Gamma exceeds
// the double range.
double gamma_real(double x);
double rgamma_real(double x);

// |z| above which the defining series would need more than ~14 decimal
// digits of cancellation headroom per the e^{|z|^{1/alpha}} term peak, and
// the asymptotic expansions take over.
double switch_radius(double alpha);

// E_{alpha,beta}(z) for real z, alpha > 0, any real beta.  Dispatches
// between the series and the asymptotic regimes; closed forms for
// (alpha,beta) in {(1,1),(1,2),(2,1),(2,2)}.
EvalResult ml(double alpha, double beta, double z);

// Forced engines, mainly for validation.  ml_series ignores the switch
// radius (cost grows with |z|^{1/alpha}).  ml_asymptotic_negative requires
// z < 0 and 0 < alpha < 2; nterms <= 0 selects optimal truncation.
EvalResult ml_series(double alpha, double beta, double z);
EvalResult ml_asymptotic_negative(double alpha, double beta, double z, int nterms);

// d/dz E_{alpha,beta}(z).
EvalResult ml_derivative(double alpha, double beta, double z);

const char* regime_name(Regime r);

}  // namespace fracord::mlcore
