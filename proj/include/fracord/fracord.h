#ifndef FRACORD_H
#define FRACORD_H

/* C interface to the fracord library: Mittag-Leffler evaluation, closed-form
 * solutions of four linear fractional initial-value problems, discrete
 * fractional operators, and order recovery from solution tails.
 *
 * Every function returns a status code and writes results through out
 * pointers.  On any nonzero status the out values are unspecified and
 * fracord_last_error() carries a message for the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FRACORD_OK 0
#define FRACORD_ERR_DOMAIN 1         /* argument outside the defined range */
#define FRACORD_ERR_NO_CONVERGENCE 2 /* series/iteration budget exhausted */
#define FRACORD_ERR_FIT 3            /* tail is not a power-law approach */
#define FRACORD_ERR_SIGNAL 4         /* indicator undefined (u vanishes) */
#define FRACORD_ERR_GRID 5           /* bad sample grid */
#define FRACORD_ERR_UNSUPPORTED 6    /* valid input, unimplemented regime */
#define FRACORD_ERR_OVERFLOW 7       /* result exceeds double range */
#define FRACORD_ERR_INVALID_HANDLE 8 /* NULL or freed handle */

/* values of fracord_eval_result.regime */
#define FRACORD_REGIME_SERIES 0
#define FRACORD_REGIME_ASYMPTOTIC_NEGATIVE 1
#define FRACORD_REGIME_EXPONENTIAL_POSITIVE 2

/* message for the most recent failing call on this thread */
const char* fracord_last_error(void);

const char* fracord_version(void);

/* ---- special functions ---- */

typedef struct {
    double value;
    double abs_error_estimate;
    int regime;   /* FRACORD_REGIME_* */
    int degraded; /* 1 when the estimated relative error is worse than ~1e-9 */
} fracord_eval_result;

/* Gamma on the real line; FRACORD_ERR_DOMAIN within 1e-12 of a nonpositive
 * integer, FRACORD_ERR_OVERFLOW past the double range. */
int fracord_gamma(double x, double* out);

/* 1/Gamma, total: exactly 0 at the poles. */
int fracord_rgamma(double x, double* out);

/* E_{alpha,beta}(z), alpha > 0, real beta and z. */
int fracord_ml(double alpha, double beta, double z, fracord_eval_result* out);

/* d/dz E_{alpha,beta}(z). */
int fracord_ml_derivative(double alpha, double beta, double z,
                          fracord_eval_result* out);

/* Forced engines, mainly for validation.  fracord_ml_series ignores the
 * regime switch (cost grows with |z|^{1/alpha}).  fracord_ml_asymptotic_negative
 * requires z < 0 and 0 < alpha < 2; nterms <= 0 selects optimal truncation. */
int fracord_ml_series(double alpha, double beta, double z,
                      fracord_eval_result* out);
int fracord_ml_asymptotic_negative(double alpha, double beta, double z,
                                   int nterms, fracord_eval_result* out);

/* |z| where evaluation switches from the series to the asymptotic regime */
int fracord_switch_radius(double alpha, double* out);

const char* fracord_regime_name(int regime);

/* ---- closed-form solutions ---- */

/* Both roots of x^2 + a1 x + a0 = 0, least negative first; requires
 * a1, a0 > 0 and a non-degenerate discriminant. */
int fracord_characteristic_roots(double a1, double a0, double* r1, double* r2);

/* Partial-fraction weights and rates of the two-term relaxation:
 * rates are the roots of x^2 + 2 mu x + gamma, weights
 * c_i = (1 +- mu/sqrt(mu^2 - gamma))/2.  Requires mu > 0, 0 < gamma < mu^2. */
int fracord_two_term_coefficients(double mu, double gamma, double* c1,
                                  double* c2, double* r1, double* r2);

typedef struct fracord_solution fracord_solution;

/* u(t) = sum_i c_i t^{b-1} E_{b,b}(r_i t^b) with rates from
 * x^2 + a1 x + a0; solves the sequential two-term equation of order 2b.
 * b in (0, 1]. */
int fracord_solve_two_rate_density(double a1, double a0, double c1, double c2,
                                   double beta, fracord_solution** out);

/* u(t) = c1 E_b(r1 t^b) + c2 E_b(r2 t^b) with weights and rates from
 * (mu, gamma); solves D^{2b} u + 2 mu D^b u + gamma u = 0, u(0) = 1.
 * b in (0, 1/2). */
int fracord_solve_two_term_relaxation(double mu, double gamma, double beta,
                                      fracord_solution** out);

/* u(t) = E_b(r t^b) + t E_{b,2}(r t^b); solves D^b u = r u with
 * u(0) = u'(0) = 1.  b in (1, 2), r < 0. */
int fracord_solve_damped_oscillation(double rate, double beta,
                                     fracord_solution** out);

/* u(t) = E_b(r t^b); solves D^b u = r u, u(0) = 1.  b in (0, 1], r < 0. */
int fracord_solve_pure_relaxation(double rate, double beta,
                                  fracord_solution** out);

void fracord_solution_free(fracord_solution* s);

/* u(t) and u'(t); either out pointer may be NULL.  t = 0 returns the exact
 * initial values and FRACORD_ERR_DOMAIN where the class is singular there. */
int fracord_solution_eval(const fracord_solution* s, double t, double* u,
                          double* du);

/* Leading large-t power law.  FRACORD_ERR_DOMAIN until t is deep enough in
 * the algebraic tail for the expansion to apply. */
int fracord_solution_asymptotic(const fracord_solution* s, double t, double* u,
                                double* du);

/* additive offset turning lim eta(t) into the equation order */
int fracord_solution_eta_offset(const fracord_solution* s, double* out);

/* ---- discrete fractional operators ----
 *
 * All operate on n samples of u at t = i h, i = 0..n-1, and write n values.
 * beta ranges: integral beta > 0; Caputo and Riemann-Liouville derivatives
 * beta in (0, 2); at least 3 samples. */

int fracord_rl_integral(const double* u, size_t n, double h, double beta,
                        double* out);
int fracord_caputo_derivative(const double* u, size_t n, double h, double beta,
                              double* out);
int fracord_rl_derivative(const double* u, size_t n, double h, double beta,
                          double* out);
/* D^{beta2}(D^{beta1} u), both Caputo */
int fracord_sequential_derivative(const double* u, size_t n, double h,
                                  double beta1, double beta2, double* out);

/* ---- defining-equation residual ---- */

typedef struct fracord_residual fracord_residual;

/* Applies the defining equation of the solution's class to samples of the
 * closed form on [0, t_max] with step h; reports the residual past the
 * startup window and whether halving h shrinks it by >= 1.5x. */
int fracord_residual_compute(const fracord_solution* s, double t_max, double h,
                             fracord_residual** out);
void fracord_residual_free(fracord_residual* r);

/* pointers stay valid until fracord_residual_free */
int fracord_residual_data(const fracord_residual* r, const double** t,
                          const double** residual, size_t* n);
int fracord_residual_max_abs(const fracord_residual* r, double* out);
int fracord_residual_converges(const fracord_residual* r, int* out);

/* ---- order recovery ---- */

typedef struct {
    double beta_hat;       /* extrapolated limit plus the class offset */
    double decay_exponent; /* p in eta(t) ~ eta_inf + a t^{-p} */
    double residual;       /* RMS misfit of the winning power law */
} fracord_order_fit;

/* eta(t) = -t u'(t)/u(t); FRACORD_ERR_SIGNAL where u vanishes */
int fracord_indicator(double t, double u, double du, double* out);

int fracord_order_from_limit(double eta_inf, double offset, double* out);

/* Extrapolates eta -> eta_inf from samples on an increasing grid by fitting
 * eta = A + B t^{-p} on the tail half; beta_hat = A + offset. */
int fracord_extrapolate_limit(const double* t, const double* eta, size_t n,
                              double offset, fracord_order_fit* out);

/* indicator series from the closed form, extrapolated */
int fracord_indicator_series_analytic(const fracord_solution* s,
                                      const double* t, size_t n,
                                      fracord_order_fit* out);

/* same from bare (t, u) samples; u' by three-point differences in log-log */
int fracord_indicator_series_sampled(const double* t, const double* u,
                                     size_t n, double offset,
                                     fracord_order_fit* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FRACORD_H */
