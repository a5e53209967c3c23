#include "fdesolve.hpp"

#include <cmath>

#include "errors.hpp"
#include "mlcore.hpp"

namespace fracord::fdesolve {

namespace {

constexpr double kDegenerateRel = 1e-12;

void require(bool ok, const char* msg) {
    if (!ok) throw Error(ErrorCode::Domain, msg);
}

double term_sum(const std::vector<SolutionTerm>& terms, double t) {
    double s = 0.0;
    for (const SolutionTerm& tm : terms) {
        double arg = tm.rate * std::pow(t, tm.ml_alpha);
        double e = mlcore::ml(tm.ml_alpha, tm.ml_beta, arg).value;
        s += tm.coefficient * std::pow(t, tm.power) * e;
    }
    return s;
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::Domain, "eval: t must be finite and >= 0");
}

}  // namespace

Roots2 characteristic_roots(double a1, double a0) {
    require(std::isfinite(a1) && std::isfinite(a0),
            "characteristic_roots: nonfinite coefficient");
    require(a1 > 0.0 && a0 > 0.0,
            "characteristic_roots: coefficients must be positive");
    double disc = a1 * a1 - 4.0 * a0;
    require(disc > kDegenerateRel * a1 * a1,
            "characteristic_roots: discriminant vanishes (repeated root)");
    // r2 adds the like-signed parts; r1 by the product avoids cancellation
    double r2 = -0.5 * (a1 + std::sqrt(disc));
    double r1 = a0 / r2;
    return {r1, r2};
}

TwoTermCoeffs two_term_coefficients(double mu, double gamma) {
    require(std::isfinite(mu) && std::isfinite(gamma),
            "two_term_coefficients: nonfinite parameter");
    require(mu > 0.0 && gamma > 0.0,
            "two_term_coefficients: mu and gamma must be positive");
    double disc = mu * mu - gamma;
    require(disc > kDegenerateRel * mu * mu,
            "two_term_coefficients: requires gamma < mu^2 (distinct real rates)");
    double d = std::sqrt(disc);
    return {0.5 * (1.0 + mu / d), 0.5 * (1.0 - mu / d), -mu + d, -mu - d};
}

Solution solve_two_rate_density(double a1, double a0, double c1, double c2,
                                double beta) {
    require(std::isfinite(c1) && std::isfinite(c2) && std::isfinite(beta),
            "two_rate_density: nonfinite parameter");
    require(beta > 0.0 && beta <= 1.0, "two_rate_density: beta in (0, 1]");
    require(c1 != 0.0 || c2 != 0.0, "two_rate_density: zero solution");
    Roots2 r = characteristic_roots(a1, a0);
    Solution s;
    s.cls = ProblemClass::TwoRateDensity;
    s.beta = beta;
    s.eta_offset = -1.0;
    s.u_terms = {{c1, beta - 1.0, beta, beta, r.r1},
                 {c2, beta - 1.0, beta, beta, r.r2}};
    s.du_terms = {{c1, beta - 2.0, beta, beta - 1.0, r.r1},
                  {c2, beta - 2.0, beta, beta - 1.0, r.r2}};
    // u ~ -(c1/r1^2 + c2/r2^2) t^{-beta-1} / Gamma(-beta); the 1/Gamma
    // factor vanishes at beta = 1, where the decay is purely exponential
    double s2 = c1 / (r.r1 * r.r1) + c2 / (r.r2 * r.r2);
    s.lead_coeff = -s2 * mlcore::rgamma_real(-beta);
    s.lead_power = -beta - 1.0;
    s.p1 = a1;
    s.p2 = a0;
    return s;
}

Solution solve_two_term_relaxation(double mu, double gamma, double beta) {
    require(std::isfinite(beta), "two_term_relaxation: nonfinite beta");
    require(beta > 0.0 && beta < 0.5, "two_term_relaxation: beta in (0, 1/2)");
    TwoTermCoeffs c = two_term_coefficients(mu, gamma);
    Solution s;
    s.cls = ProblemClass::TwoTermRelaxation;
    s.beta = beta;
    s.eta_offset = 0.0;
    s.u_terms = {{c.c1, 0.0, beta, 1.0, c.r1}, {c.c2, 0.0, beta, 1.0, c.r2}};
    s.du_terms = {{c.c1 * c.r1, beta - 1.0, beta, beta, c.r1},
                  {c.c2 * c.r2, beta - 1.0, beta, beta, c.r2}};
    double s1 = c.c1 / c.r1 + c.c2 / c.r2;  // equals -2 mu / gamma
    s.lead_coeff = -s1 * mlcore::rgamma_real(1.0 - beta);
    s.lead_power = -beta;
    s.p1 = mu;
    s.p2 = gamma;
    return s;
}

Solution solve_damped_oscillation(double rate, double beta) {
    require(std::isfinite(rate) && std::isfinite(beta),
            "damped_oscillation: nonfinite parameter");
    require(beta > 1.0 && beta < 2.0, "damped_oscillation: beta in (1, 2)");
    require(rate < 0.0, "damped_oscillation: rate must be negative");
    Solution s;
    s.cls = ProblemClass::DampedOscillation;
    s.beta = beta;
    s.eta_offset = 1.0;
    s.u_terms = {{1.0, 0.0, beta, 1.0, rate}, {1.0, 1.0, beta, 2.0, rate}};
    s.du_terms = {{rate, beta - 1.0, beta, beta, rate},
                  {1.0, 0.0, beta, 1.0, rate}};
    s.lead_coeff = -mlcore::rgamma_real(1.0 - beta) / rate;
    s.lead_power = -beta;
    s.p1 = rate;
    s.p2 = 0.0;
    return s;
}

Solution solve_pure_relaxation(double rate, double beta) {
    require(std::isfinite(rate) && std::isfinite(beta),
            "pure_relaxation: nonfinite parameter");
    require(beta > 0.0 && beta <= 1.0, "pure_relaxation: beta in (0, 1]");
    require(rate < 0.0, "pure_relaxation: rate must be negative");
    Solution s;
    s.cls = ProblemClass::PureRelaxation;
    s.beta = beta;
    s.eta_offset = 0.0;
    s.u_terms = {{1.0, 0.0, beta, 1.0, rate}};
    s.du_terms = {{rate, beta - 1.0, beta, beta, rate}};
    s.lead_coeff = -mlcore::rgamma_real(1.0 - beta) / rate;
    s.lead_power = -beta;
    s.p1 = rate;
    s.p2 = 0.0;
    return s;
}

double eval_u(const Solution& s, double t) {
    check_time(t);
    if (t == 0.0) {
        if (s.cls == ProblemClass::TwoRateDensity)
            throw Error(ErrorCode::Domain,
                        "eval: two-rate density is singular at t = 0");
        return 1.0;  // every other class is normalized to u(0) = 1
    }
    return term_sum(s.u_terms, t);
}

double eval_du(const Solution& s, double t) {
    check_time(t);
    if (t == 0.0) {
        switch (s.cls) {
            case ProblemClass::DampedOscillation:
                return 1.0;
            case ProblemClass::PureRelaxation:
                if (s.beta == 1.0) return s.p1;
                break;
            default:
                break;
        }
        throw Error(ErrorCode::Domain, "eval: u' is singular at t = 0");
    }
    return term_sum(s.du_terms, t);
}

double asymptotic_u(const Solution& s, double t) {
    check_time(t);
    double zs = mlcore::switch_radius(s.beta);
    for (const SolutionTerm& tm : s.u_terms)
        if (tm.rate * std::pow(t, tm.ml_alpha) > -zs)
            throw Error(ErrorCode::Domain,
                        "asymptotic_u: t below the asymptotic range");
    double lead = s.lead_coeff * std::pow(t, s.lead_power);
    if (s.cls == ProblemClass::DampedOscillation)
        lead *= 1.0 + t / (1.0 - s.beta);
    return lead;
}

double asymptotic_du(const Solution& s, double t) {
    check_time(t);
    double zs = mlcore::switch_radius(s.beta);
    for (const SolutionTerm& tm : s.u_terms)
        if (tm.rate * std::pow(t, tm.ml_alpha) > -zs)
            throw Error(ErrorCode::Domain,
                        "asymptotic_du: t below the asymptotic range");
    if (s.cls == ProblemClass::DampedOscillation)
        return s.lead_coeff *
               (std::pow(t, -s.beta) - s.beta * std::pow(t, -s.beta - 1.0));
    return s.lead_coeff * s.lead_power * std::pow(t, s.lead_power - 1.0);
}

}  // namespace fracord::fdesolve
