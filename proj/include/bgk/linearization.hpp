/// @file linearization.hpp
/// @brief Exact decomposition nu (M(F) - F) = (Pf - f) + Gamma1(f) + Gamma2(f).
///
/// P projects onto span{e_i mu}. The nonlinear remainder is assembled from a
/// Taylor expansion of the local Maxwellian and of nu = rho^a T^b along the
/// transition path (rho_th, rho_th U_th, G_th) = theta * (rho, rho U, G) +
/// (1-theta) * (1, 0, 0), with the theta integrals done by Gauss-Legendre.
///
/// A_i(theta) and the 5x5 Hessian of M in the conserved variables are the
/// genuine chain-rule derivatives (gradients transform through the inverse
/// transposed Jacobian). They are validated against central finite
/// differences in the test suite; the Hessian is symmetric and annihilates
/// the conserved vector (M is 1-homogeneous in (rho, rho U, G)).

#pragma once

#include <array>
#include <string>
#include <vector>

#include "bgk/fields.hpp"

namespace bgk {

/// Macroscopic state along the transition path at parameter theta in [0,1].
struct ThetaFields {
    double theta = 0.0;
    double rho = 1.0;
    Vec3 U{0.0, 0.0, 0.0};
    double T = 1.0;
    double G = 0.0;
};

using Hessian5 = std::array<std::array<double, 5>, 5>;

/// rho_th = th rho + (1-th), rho_th U_th = th rho U, G_th = th G;
/// T_th solved from the energy relation. Throws if T_th <= 0.
ThetaFields theta_transition(const CellState& s, double theta);

/// dnu/dtheta = sum_i A_i(theta) <f, e_i>; derivative of nu = rho^a T^b
/// through the conserved variables:
///   A_1     = rho^{a-1} T^{b-1} (a T + (b/3)(|U|^2 - 3T + 3))
///   A_{1+i} = -(2/3) b rho^{a-1} U_i T^{b-1}
///   A_5     = sqrt(2/3) b rho^{a-1} T^{b-1}
std::array<double, 5> a_coefficients(const ThetaFields& tf, double a, double b);

/// Hessian of the local Maxwellian in the conserved variables (rho, rho U, G),
/// evaluated at (tf, v). Includes the factor M(tf, v).
Hessian5 hessian_M(const ThetaFields& tf, const Vec3& v);

/// Bracket vector <f, e_i>_v (velocity quadrature) for one cell.
std::array<double, 5> brackets(const double* f_cell, const Domain& dom);

/// Pf = sum_i <f, e_i> e_i mu with the moment-matched discrete mu.
GridFunction project_P(const GridFunction& f, const Domain& dom);

/// Gamma1 = (Pf - f) sum_i [int_0^1 A_i dtheta] <f, e_i>.
GridFunction gamma1(const GridFunction& f, const MacroFields& fields, double a, double b, int n_theta,
                    const Domain& dom);

/// Gamma2 = rho^a T^b sum_ij [int_0^1 H_ij(theta) (1-theta) dtheta] <f,e_i><f,e_j>.
GridFunction gamma2(const GridFunction& f, const MacroFields& fields, double a, double b, int n_theta,
                    const Domain& dom);

struct IdentityCellRow {
    int cell = 0;
    double max_residual = 0.0;
    double relative_residual = 0.0;
};

/// Residual report of nu(M(F)-F) - (Pf - f) - Gamma1 - Gamma2.
struct IdentityReport {
    double linf_residual = 0.0;
    double l2_residual = 0.0;
    double linf_lhs = 0.0;        // ||nu (M(F)-F)||_inf
    double linf_terms = 0.0;      // max of lhs and each right-hand term norm
    double relative_residual = 0.0;        // linf_residual / linf_lhs
    double relative_to_terms = 0.0;        // linf_residual / linf_terms
    double linf_P_gamma = 0.0;             // ||P(Gamma1 + Gamma2)||_inf
    double relative_P_gamma = 0.0;         // linf_P_gamma / linf_lhs
    std::vector<IdentityCellRow> cells;

    std::string to_text() const;  // one line per cell
};

IdentityReport verify_linearization_identity(const GridFunction& F, double a, double b, int n_theta,
                                             const Domain& dom);

}  // namespace bgk
