/// @file diagnostics.hpp
/// @brief Scalar functionals: conserved totals, entropies, weighted norms,
///        macroscopic deviation, regime transition time, decay-rate fit.

#pragma once

#include <string>
#include <vector>

#include "bgk/fields.hpp"

namespace bgk {

/// One row of the diagnostics time series. CSV column order is fixed:
/// time,mass,mom_x,mom_y,mom_z,energy,H,rel_entropy,entropy_split,linf_q,macro_dev,pp_ratio
struct DiagnosticsRecord {
    double time = 0.0;
    double mass = 0.0;
    Vec3 momentum{0.0, 0.0, 0.0};
    double energy = 0.0;
    double boltzmann_H = 0.0;
    double relative_entropy = 0.0;
    double entropy_split = 0.0;
    double linf_q_norm = 0.0;
    double macro_deviation = 0.0;
    double pp_ratio = 0.0;
};

/// sup over (cell, node) of (1 + |v|^q) |f|; the weight convention is
/// <v>^q := 1 + |v|^q (so q = 0 gives weight 2).
double weighted_linf_norm(const GridFunction& f, double q, const Domain& dom);

/// Relative entropy in the psi-form: integral of psi(F/mu) mu with
/// psi(x) = x ln x - x + 1 and 0 ln 0 := 0. Non-negative by construction.
/// Throws on negative F values.
double relative_entropy(const GridFunction& F, const Domain& dom);

/// Raw form integral of (F ln F - mu ln mu); equals the psi-form whenever F
/// shares the discrete mass of mu. Emitted for cross-checking.
double relative_entropy_raw(const GridFunction& F, const Domain& dom);

/// Boltzmann functional integral of F ln F (0 ln 0 := 0).
double boltzmann_H(const GridFunction& F, const Domain& dom);

/// Integral of (1/(4 mu)) |f|^2 on {|f| <= mu} plus (1/4)|f| on {|f| > mu}.
/// The boundary |f| = mu counts in the quadratic branch.
double entropy_split(const GridFunction& f, const Domain& dom);

/// max over cells of max(|rho - 1|, |U|_2, |T - 1|).
double macro_deviation(const MacroFields& fields);

/// max over cells of rho / T^{3/2}, divided by ||F||_inf.
double pp_ratio(const GridFunction& F, const MacroFields& fields);

/// Conserved totals over the full phase-space quadrature.
struct ConservedTotals {
    double mass = 0.0;
    Vec3 momentum{0.0, 0.0, 0.0};
    double energy = 0.0;
};
ConservedTotals conserved_totals(const GridFunction& F, const Domain& dom);

/// t_eq = ln(4 C_q M0 / delta) with C_q = 1/5 + 1/(q-5).
/// Requires q > 10, 0 < delta < 1/3, M0 > 0.
double t_eq_predicted(double M0, double delta, double q);

double moment_bound_constant(double q);  // C_q = 1/5 + 1/(q-5), q > 5

/// Per-cell check of (rho, |rho U|, 3 rho T + rho|U|^2) <= C_q ||F||_{inf,q}.
struct MomentBoundReport {
    double c_q = 0.0;
    double weighted_norm = 0.0;  // ||F||_{inf,q}
    double max_ratio = 0.0;      // worst lhs / (C_q * norm)
    std::array<double, 3> lhs_max{0.0, 0.0, 0.0};  // rho, |rhoU|, energy moment
    bool pass = false;
};
MomentBoundReport moment_bound_check(const GridFunction& F, double q, const Domain& dom);

/// Least-squares fit of ln||f|| = ln C - k t over samples with t >= t_start.
struct DecayFit {
    double k = 0.0;
    double C = 0.0;
    double r2 = 0.0;
    int n_used = 0;
};
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series, double t_start);

/// Regime transition bookkeeping for one run.
struct RegimeReport {
    double t_eq_predicted = 0.0;
    double t_delta_crossing = 0.0;  // valid iff crossed
    bool crossed = false;           // macro_dev <= 2 delta from some record onward
    double delta = 0.0;
    double M0 = 0.0;  // ||f_0||_{inf,q}
    double q = 0.0;

    std::string to_text() const;
};

/// Full record of the current state.
DiagnosticsRecord compute_record(const GridFunction& F, const MacroFields& fields, double time, double q,
                                 const Domain& dom);

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);
void write_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);

}  // namespace bgk
