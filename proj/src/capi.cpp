#include "fracord/fracord.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fdesolve.hpp"
#include "fracops.hpp"
#include "mlcore.hpp"
#include "orderest.hpp"

using namespace fracord;

struct fracord_solution {
    fdesolve::Solution impl;
};

struct fracord_residual {
    fracops::ResidualReport impl;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what;
    return code;
}

// every entry point funnels through here so the C side never sees a throw
template <typename F>
int guard(F&& body) {
    try {
        body();
        return FRACORD_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return static_cast<int>(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return FRACORD_ERR_NO_CONVERGENCE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FRACORD_ERR_DOMAIN;
    }
}

void to_c(const mlcore::EvalResult& r, fracord_eval_result* out) {
    out->value = r.value;
    out->abs_error_estimate = r.abs_error_estimate;
    out->regime = static_cast<int>(r.regime);
    out->degraded = r.degraded ? 1 : 0;
}

void to_c(const orderest::FitResult& r, fracord_order_fit* out) {
    out->beta_hat = r.beta_hat;
    out->decay_exponent = r.decay_exponent;
    out->residual = r.residual;
}

constexpr const char* kNullArg = "null pointer argument";

template <typename F>
int make_solution(fracord_solution** out, F&& build) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    *out = nullptr;
    return guard([&] { *out = new fracord_solution{build()}; });
}

template <typename F>
int array_op(const double* u, size_t n, double* out, F&& apply) {
    if (!u || !out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] {
        std::vector<double> in(u, u + n);
        std::vector<double> result = apply(in);
        for (size_t i = 0; i < n; ++i) out[i] = result[i];
    });
}

}  // namespace

extern "C" {

const char* fracord_last_error(void) { return g_last_error.c_str(); }

const char* fracord_version(void) { return "1.0.0"; }

int fracord_gamma(double x, double* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { *out = mlcore::gamma_real(x); });
}

int fracord_rgamma(double x, double* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { *out = mlcore::rgamma_real(x); });
}

int fracord_ml(double alpha, double beta, double z, fracord_eval_result* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { to_c(mlcore::ml(alpha, beta, z), out); });
}

int fracord_ml_derivative(double alpha, double beta, double z,
                          fracord_eval_result* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { to_c(mlcore::ml_derivative(alpha, beta, z), out); });
}

int fracord_ml_series(double alpha, double beta, double z,
                      fracord_eval_result* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { to_c(mlcore::ml_series(alpha, beta, z), out); });
}

int fracord_ml_asymptotic_negative(double alpha, double beta, double z,
                                   int nterms, fracord_eval_result* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard(
        [&] { to_c(mlcore::ml_asymptotic_negative(alpha, beta, z, nterms), out); });
}

int fracord_switch_radius(double alpha, double* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { *out = mlcore::switch_radius(alpha); });
}

const char* fracord_regime_name(int regime) {
    if (regime < 0 || regime > 2) return "unknown";
    return mlcore::regime_name(static_cast<mlcore::Regime>(regime));
}

int fracord_characteristic_roots(double a1, double a0, double* r1,
                                 double* r2) {
    if (!r1 || !r2) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] {
        auto r = fdesolve::characteristic_roots(a1, a0);
        *r1 = r.r1;
        *r2 = r.r2;
    });
}

int fracord_two_term_coefficients(double mu, double gamma, double* c1,
                                  double* c2, double* r1, double* r2) {
    if (!c1 || !c2 || !r1 || !r2)
        return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] {
        auto c = fdesolve::two_term_coefficients(mu, gamma);
        *c1 = c.c1;
        *c2 = c.c2;
        *r1 = c.r1;
        *r2 = c.r2;
    });
}

int fracord_solve_two_rate_density(double a1, double a0, double c1, double c2,
                                   double beta, fracord_solution** out) {
    return make_solution(out, [&] {
        return fdesolve::solve_two_rate_density(a1, a0, c1, c2, beta);
    });
}

int fracord_solve_two_term_relaxation(double mu, double gamma, double beta,
                                      fracord_solution** out) {
    return make_solution(
        out, [&] { return fdesolve::solve_two_term_relaxation(mu, gamma, beta); });
}

int fracord_solve_damped_oscillation(double rate, double beta,
                                     fracord_solution** out) {
    return make_solution(
        out, [&] { return fdesolve::solve_damped_oscillation(rate, beta); });
}

int fracord_solve_pure_relaxation(double rate, double beta,
                                  fracord_solution** out) {
    return make_solution(
        out, [&] { return fdesolve::solve_pure_relaxation(rate, beta); });
}

void fracord_solution_free(fracord_solution* s) { delete s; }

int fracord_solution_eval(const fracord_solution* s, double t, double* u,
                          double* du) {
    if (!s) return fail(FRACORD_ERR_INVALID_HANDLE, "null solution handle");
    return guard([&] {
        if (u) *u = fdesolve::eval_u(s->impl, t);
        if (du) *du = fdesolve::eval_du(s->impl, t);
    });
}

int fracord_solution_asymptotic(const fracord_solution* s, double t, double* u,
                                double* du) {
    if (!s) return fail(FRACORD_ERR_INVALID_HANDLE, "null solution handle");
    return guard([&] {
        if (u) *u = fdesolve::asymptotic_u(s->impl, t);
        if (du) *du = fdesolve::asymptotic_du(s->impl, t);
    });
}

int fracord_solution_eta_offset(const fracord_solution* s, double* out) {
    if (!s) return fail(FRACORD_ERR_INVALID_HANDLE, "null solution handle");
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    *out = s->impl.eta_offset;
    return FRACORD_OK;
}

int fracord_rl_integral(const double* u, size_t n, double h, double beta,
                        double* out) {
    return array_op(u, n, out, [&](const std::vector<double>& in) {
        return fracops::rl_integral(in, h, beta);
    });
}

int fracord_caputo_derivative(const double* u, size_t n, double h, double beta,
                              double* out) {
    return array_op(u, n, out, [&](const std::vector<double>& in) {
        return fracops::caputo_derivative(in, h, beta);
    });
}

int fracord_rl_derivative(const double* u, size_t n, double h, double beta,
                          double* out) {
    return array_op(u, n, out, [&](const std::vector<double>& in) {
        return fracops::rl_derivative(in, h, beta);
    });
}

int fracord_sequential_derivative(const double* u, size_t n, double h,
                                  double beta1, double beta2, double* out) {
    return array_op(u, n, out, [&](const std::vector<double>& in) {
        return fracops::sequential_derivative(in, h, beta1, beta2);
    });
}

int fracord_residual_compute(const fracord_solution* s, double t_max, double h,
                             fracord_residual** out) {
    if (!s) return fail(FRACORD_ERR_INVALID_HANDLE, "null solution handle");
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    *out = nullptr;
    return guard([&] {
        *out = new fracord_residual{fracops::fde_residual(s->impl, t_max, h)};
    });
}

void fracord_residual_free(fracord_residual* r) { delete r; }

int fracord_residual_data(const fracord_residual* r, const double** t,
                          const double** residual, size_t* n) {
    if (!r) return fail(FRACORD_ERR_INVALID_HANDLE, "null residual handle");
    if (!t || !residual || !n) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    *t = r->impl.t.data();
    *residual = r->impl.residual.data();
    *n = r->impl.t.size();
    return FRACORD_OK;
}

int fracord_residual_max_abs(const fracord_residual* r, double* out) {
    if (!r) return fail(FRACORD_ERR_INVALID_HANDLE, "null residual handle");
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    *out = r->impl.max_abs;
    return FRACORD_OK;
}

int fracord_residual_converges(const fracord_residual* r, int* out) {
    if (!r) return fail(FRACORD_ERR_INVALID_HANDLE, "null residual handle");
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    *out = r->impl.converges ? 1 : 0;
    return FRACORD_OK;
}

int fracord_indicator(double t, double u, double du, double* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { *out = orderest::indicator(t, u, du); });
}

int fracord_order_from_limit(double eta_inf, double offset, double* out) {
    if (!out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] { *out = orderest::order_from_limit(eta_inf, offset); });
}

int fracord_extrapolate_limit(const double* t, const double* eta, size_t n,
                              double offset, fracord_order_fit* out) {
    if (!t || !eta || !out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] {
        std::vector<double> tv(t, t + n), ev(eta, eta + n);
        to_c(orderest::extrapolate_limit(tv, ev, offset), out);
    });
}

int fracord_indicator_series_analytic(const fracord_solution* s,
                                      const double* t, size_t n,
                                      fracord_order_fit* out) {
    if (!s) return fail(FRACORD_ERR_INVALID_HANDLE, "null solution handle");
    if (!t || !out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] {
        std::vector<double> tv(t, t + n);
        to_c(orderest::indicator_series_analytic(s->impl, tv), out);
    });
}

int fracord_indicator_series_sampled(const double* t, const double* u,
                                     size_t n, double offset,
                                     fracord_order_fit* out) {
    if (!t || !u || !out) return fail(FRACORD_ERR_INVALID_HANDLE, kNullArg);
    return guard([&] {
        std::vector<double> tv(t, t + n), uv(u, u + n);
        to_c(orderest::indicator_series_sampled(tv, uv, offset), out);
    });
}

}  // extern "C"
