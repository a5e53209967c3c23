#pragma once

#include <vector>

#include "fdesolve.hpp"

namespace fracord::fracops {

// Discrete fractional operators on a uniform grid t_i = i h, i < u.size().
// All return one value per grid point.

// Riemann-Liouville integral of order beta > 0, product-trapezoid weights
// (second order for smooth u).
std::vector<double> rl_integral(const std::vector<double>& u, double h,
                                double beta);

// Caputo derivative.  0 < beta < 1: L1 scheme.  1 < beta < 2: L1 of order
// beta-1 applied to a finite-difference u'.  beta = 1: plain differences.
std::vector<double> caputo_derivative(const std::vector<double>& u, double h,
                                      double beta);

// Riemann-Liouville derivative via Grunwald-Letnikov weights, 0 < beta < 2.
std::vector<double> rl_derivative(const std::vector<double>& u, double h,
                                  double beta);

// Stagewise composition D^{beta2} (D^{beta1} u), both Caputo.
std::vector<double> sequential_derivative(const std::vector<double>& u,
                                          double h, double beta1,
                                          double beta2);

struct ResidualReport {
    std::vector<double> t;
    std::vector<double> residual;
    double max_abs;
    bool converges;  // max_abs shrinks by >= 1.5x when h is halved
};

// Applies the defining equation of the solution's class to samples of the
// closed form on [0, t_max] with step h and reports the residual over the
// window [max(10h, 0.05 t_max), t_max].  The early indices are excluded:
// near t = 0 the L1 and Grunwald weights see the Taylor head of t^{beta}
// terms, and their pointwise error there does not shrink with h.
//
// The two classes that are singular at the origin (the two-rate density,
// and the damped oscillation whose u'' blows up) get their operators based
// at t0 = 0.025 t_max instead, with the exact history on (0, t0) restored
// from the closed form by tanh-sinh quadrature; otherwise no refinement of
// h can make the discrete operator converge at the singular head.
ResidualReport fde_residual(const fdesolve::Solution& s, double t_max,
                            double h);

}  // namespace fracord::fracops
