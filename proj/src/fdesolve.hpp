#pragma once

#include <vector>

namespace fracord::fdesolve {

enum class ProblemClass {
    // u(t) = sum_i c_i t^{b-1} E_{b,b}(r_i t^b); singular at t = 0
    TwoRateDensity = 0,
    // u(t) = c_1 E_b(r_1 t^b) + c_2 E_b(r_2 t^b), b in (0, 1/2)
    TwoTermRelaxation = 1,
    // u(t) = E_b(r t^b) + t E_{b,2}(r t^b), b in (1, 2), r < 0
    DampedOscillation = 2,
    // u(t) = E_b(r t^b), b in (0, 1], r < 0
    PureRelaxation = 3,
};

// One summand c * t^{power} * E_{ml_alpha, ml_beta}(rate * t^{ml_alpha}).
struct SolutionTerm {
    double coefficient;
    double power;
    double ml_alpha;
    double ml_beta;
    double rate;
};

struct Roots2 {
    double r1, r2;  // roots of x^2 + a1 x + a0, least negative first
};

struct TwoTermCoeffs {
    double c1, c2, r1, r2;
};

// Both roots of x^2 + a1 x + a0 = 0; requires a1, a0 > 0 and a
// non-degenerate discriminant, which makes both roots negative.
Roots2 characteristic_roots(double a1, double a0);

// Partial-fraction split of the two-term relaxation: rates are the roots
// of x^2 + 2 mu x + gamma, weights c_i = (1 +- mu/sqrt(mu^2-gamma))/2.
// Requires mu > 0, 0 < gamma < mu^2.
TwoTermCoeffs two_term_coefficients(double mu, double gamma);

struct Solution {
    ProblemClass cls;
    double beta;
    // order = lim_{t->inf} eta(t) + eta_offset, eta = -t u'/u
    double eta_offset;
    std::vector<SolutionTerm> u_terms;
    std::vector<SolutionTerm> du_terms;
    // leading large-t behaviour: u ~ lead_coeff * t^{lead_power}
    // (DampedOscillation carries an extra (1 + t/(1-beta)) factor,
    // applied in asymptotic_u)
    double lead_coeff;
    double lead_power;
    // defining-equation parameters: (a1, a0) for TwoRateDensity,
    // (mu, gamma) for TwoTermRelaxation, (rate, 0) otherwise
    double p1, p2;
};

Solution solve_two_rate_density(double a1, double a0, double c1, double c2,
                                double beta);
Solution solve_two_term_relaxation(double mu, double gamma, double beta);
Solution solve_damped_oscillation(double rate, double beta);
Solution solve_pure_relaxation(double rate, double beta);

// u and u' at t >= 0.  t = 0 returns the exact initial values and throws
// Domain where the class is singular there.
double eval_u(const Solution& s, double t);
double eval_du(const Solution& s, double t);

// Leading large-t forms.  Domain unless every ML argument r_i t^b is past
// the switch radius, where the algebraic tail actually dominates.
double asymptotic_u(const Solution& s, double t);
double asymptotic_du(const Solution& s, double t);

}  // namespace fracord::fdesolve
