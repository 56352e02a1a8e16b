#pragma once

#include "hardyrad/fem.hpp"
#include "hardyrad/power_sum.hpp"

#include <vector>

namespace hardyrad {

/// A closed-form radial field with its energy-space membership flag.
struct ExactField {
    PowerSum value;
    bool in_h1 = true;
};

/// Every non-constant term c r^s has s > -(N-2)/2, so |u'|^2 r^{N-1} is integrable at 0.
bool power_sum_in_h1(const PowerSum& u, int dimension);

/// u_rho = r^{-rho} - 1. Always constructed; `in_h1` is false for rho >= (N-2)/2.
ExactField exact_u_rho(double rho, int dimension);

/// Coefficients of the optimality example on the unit ball with V = x/|x|^2,
/// A = 1 and h(u) = u, evaluated verbatim from their closed forms.
struct ExampleCoefficients {
    double rho = 0.0;            ///< N / m
    double f_at_m = 0.0;         ///< F(m)
    double c = 0.0;              ///< rho (alpha+1)(N-rho-2) + rho/2 - 3(N-2)/2
    double a_coefficient = 0.0;  ///< lambda - C + F(m); a_m = a_coefficient / r^2
    double f_coefficient = 0.0;  ///< F(m) + C - N + 2;  f_m = f_coefficient / r^2
    double q_bound = 0.0;        ///< f_coefficient / a_coefficient
    bool q_bound_positive = false;
};

/// Throws DomainError when m <= 2* and HypothesisError when F(m) >= AH + lambda.
ExampleCoefficients optimality_example_coefficients(double alpha, double lambda, int dimension,
                                                    double m);

/// -Delta u = div(rho u V) + rho (N-2)/r^2, V = x/|x|^2: drift d = -rho, no
/// zero-order term, lambda = 0. Solved by u_rho.
ProblemSpec kl_problem(double rho, int dimension);

/// The example problem  -Delta u + a_m u = -div(u V) + lambda u/r^2 + f_m
/// with the printed coefficients (drift d = +1, unit diffusion).
ProblemSpec sz_problem(double alpha, double lambda, int dimension, double m);

/// Weak residual of the unregularised problem at an exact field, tested
/// against every free hat function:
///   omega int [m u' phi' - d u phi'/r + a h(u) phi - lambda u phi/r^2 - f phi] r^{N-1} dr.
std::vector<double> weak_residual(const PowerSum& u, const ProblemSpec& spec, const RadialMesh& mesh);

/// Discrete dual norm of weak_residual.
double residual_norm(const PowerSum& u, const ProblemSpec& spec, const RadialMesh& mesh);

/// f = -r^{1-N} (r^{N-1} (m u' - d u/r))' + a h(u) - lambda u/r^2 in closed form.
/// The source of `spec` is ignored. Throws UnsupportedFormError when h(u)
/// leaves the power-sum class (h not linear or an odd integer power).
PowerSum mms_source(const PowerSum& u, const ProblemSpec& spec);

} // namespace hardyrad
