/// @file fields.hpp
/// @brief Moments, Maxwellians, collision frequency, and the primitive <->
///        conserved changes of variables.
///
/// The discrete global and local Maxwellians are exponential-family fits
/// exp(alpha + beta.v + gamma |v|^2) whose *discrete* moments match the
/// target state, so the cancellation property <(M(F)-F) e_i> = 0 holds to
/// machine precision on the truncated lattice. Pointwise sampling of the
/// analytic Gaussian would leak O(quadrature error) into every conservation
/// and entropy statement downstream.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bgk/grid.hpp"

namespace bgk {

// ============================================================================
// Data containers
// ============================================================================

/// One value per (spatial cell, velocity node). Node index is fastest.
struct GridFunction {
    int n_cells = 0;
    int n_nodes = 0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(int cells, int nodes)
        : n_cells(cells), n_nodes(nodes), values(static_cast<std::size_t>(cells) * nodes, 0.0) {}

    double& at(int cell, int node) { return values[static_cast<std::size_t>(cell) * n_nodes + node]; }
    double at(int cell, int node) const { return values[static_cast<std::size_t>(cell) * n_nodes + node]; }
    double* cell_data(int cell) { return values.data() + static_cast<std::size_t>(cell) * n_nodes; }
    const double* cell_data(int cell) const { return values.data() + static_cast<std::size_t>(cell) * n_nodes; }
};

/// Primitive macroscopic state of one cell.
struct CellState {
    double rho = 1.0;
    Vec3 U{0.0, 0.0, 0.0};
    double T = 1.0;
};

/// Per-cell macroscopic fields, primitive and conserved form together.
/// Conserved triple: (rho, rho U, G) with G = (rho|U|^2 + 3 rho T - 3 rho)/sqrt(6).
struct MacroFields {
    std::vector<double> rho;
    std::vector<Vec3> U;
    std::vector<double> T;
    std::vector<Vec3> rhoU;
    std::vector<double> G;

    int n_cells() const { return static_cast<int>(rho.size()); }
    void resize(int n) {
        rho.resize(n);
        U.resize(n);
        T.resize(n);
        rhoU.resize(n);
        G.resize(n);
    }
    CellState cell(int c) const { return CellState{rho[c], U[c], T[c]}; }
};

/// Exponent parameters of the discrete Maxwellian exp(alpha + beta.v + gamma|v|^2).
struct DiscreteMaxwellianParams {
    double alpha = 0.0;
    Vec3 beta{0.0, 0.0, 0.0};
    double gamma = -0.5;
    int iterations = 0;
    double residual = 0.0;            // worst scaled moment residual
    double boundary_mass_fraction = 0.0;  // analytic mass outside the box / rho
    bool boundary_warning = false;        // fraction exceeded 1e-8
};

// ============================================================================
// Operations
// ============================================================================

double conserved_G_from_primitive(double rho, const Vec3& U, double T);

/// Reverse relation: U = rhoU/rho, T = sqrt(2/3) G/rho - |rhoU|^2/(3 rho^2) + 1.
/// Throws if rho <= 0 or the resulting T <= 0.
CellState primitive_from_conserved(double rho, const Vec3& rhoU, double G);

/// rho = <F>, rho U = <vF>, 3 rho T = <|v-U|^2 F> per cell, plus the conserved
/// triple. Throws on non-positive density or temperature (reports the cell).
MacroFields compute_moments(const GridFunction& F, const VelocityGrid& vel);

/// nu = rho^a T^b per cell; requires a >= b >= 0.
std::vector<double> collision_frequency(const MacroFields& fields, double a, double b);

/// Pointwise analytic Maxwellian rho (2 pi T)^{-3/2} exp(-|v-U|^2 / (2T)).
double eval_maxwellian(double rho, const Vec3& U, double T, const Vec3& v);

/// Analytic Maxwellian mass outside [-v_max, v_max]^3, as a fraction of rho.
double maxwellian_boundary_mass_fraction(const CellState& s, double v_max);

/// Newton moment matching for one cell. `target` is (rho, rho U, E) with
/// E = <|v|^2 F> = rho|U|^2 + 3 rho T. Writes the node values into `out`
/// (length vel.count()) and returns the fitted parameters.
/// Throws if gamma >= 0 appears or the iteration fails to converge.
DiscreteMaxwellianParams discrete_maxwellian_cell(const std::array<double, 5>& target,
                                                  const VelocityGrid& vel, double* out);

/// Moment-matched discrete Maxwellian of every cell of `fields`.
GridFunction discrete_maxwellian(const MacroFields& fields, const VelocityGrid& vel,
                                 std::vector<DiscreteMaxwellianParams>* params = nullptr);

// ============================================================================
// Domain bundle
// ============================================================================

/// Grids, basis and the moment-matched discrete global Maxwellian mu,
/// shared read-only by everything downstream.
struct Domain {
    SpatialGrid space;
    VelocityGrid vel;
    CollisionBasis basis;
    std::vector<double> mu;  // per velocity node
    DiscreteMaxwellianParams mu_params;

    double cell_volume() const;  // dx^dims
    /// Quadrature of g over velocity at one cell: weight * sum g of nodes.
    int n_nodes() const { return vel.count(); }
};

Domain make_domain(int dims, int cells_per_axis, int nodes_per_axis, double v_max);

}  // namespace bgk
