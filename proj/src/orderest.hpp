#pragma once

#include <vector>

#include "fdesolve.hpp"

namespace fracord::orderest {

// eta(t) = -t u'(t) / u(t).  Signal when u vanishes.
double indicator(double t, double u, double du);

double order_from_limit(double eta_inf, double offset);

struct FitResult {
    double beta_hat;        // extrapolated limit plus the class offset
    double decay_exponent;  // p in eta(t) ~ eta_inf + a t^{-p}
    double residual;        // RMS misfit of the winning power law
};

// Extrapolates eta(t) -> eta_inf from samples on an increasing grid by
// fitting eta = A + B t^{-p} on the tail half over a log grid of decay
// exponents.  Throws Fit when no power law explains the tail.
FitResult extrapolate_limit(const std::vector<double>& t,
                            const std::vector<double>& eta, double offset);

// Indicator series from the closed-form solution, extrapolated.
FitResult indicator_series_analytic(const fdesolve::Solution& s,
                                    const std::vector<double>& t);

// Same from bare (t, u) samples: u' by three-point nonuniform differences.
// Signal on sign changes or vanishing u, where the indicator is undefined.
FitResult indicator_series_sampled(const std::vector<double>& t,
                                   const std::vector<double>& u,
                                   double offset);

}  // namespace fracord::orderest
