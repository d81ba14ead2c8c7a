#include "bgk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bgk/reduce.hpp"

namespace bgk {

namespace {

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Reduce sum over all (cell, node) pairs of term(cell, node), times the
/// phase-space quadrature weight. Per-cell partials keep the tree fixed.
template <typename Term>
double phase_space_integral(const Domain& dom, int n_cells, const Term& term) {
    std::vector<double> partial(n_cells);
    const std::size_t nv = static_cast<std::size_t>(dom.n_nodes());
    parallel_for(static_cast<std::size_t>(n_cells), [&](std::size_t c) {
        partial[c] = pairwise_sum(std::size_t{0}, nv,
                                  [&](std::size_t j) { return term(static_cast<int>(c), static_cast<int>(j)); });
    });
    return dom.cell_volume() * dom.vel.weight * pairwise_sum(partial);
}

template <typename Term>
double phase_space_max(const Domain& dom, int n_cells, const Term& term) {
    std::vector<double> partial(n_cells, 0.0);
    parallel_for(static_cast<std::size_t>(n_cells), [&](std::size_t c) {
        double m = 0.0;
        for (int j = 0; j < dom.n_nodes(); ++j) m = std::max(m, term(static_cast<int>(c), j));
        partial[c] = m;
    });
    return *std::max_element(partial.begin(), partial.end());
}

}  // namespace

double weighted_linf_norm(const GridFunction& f, double q, const Domain& dom) {
    if (q < 0.0) throw std::invalid_argument("weighted_linf_norm: q must be >= 0");
    std::vector<double> wq(dom.n_nodes());
    for (int j = 0; j < dom.n_nodes(); ++j) wq[j] = 1.0 + std::pow(std::sqrt(dom.vel.speed2[j]), q);
    return phase_space_max(dom, f.n_cells,
                           [&](int c, int j) { return wq[j] * std::abs(f.at(c, j)); });
}

double relative_entropy(const GridFunction& F, const Domain& dom) {
    for (double v : F.values)
        if (v < 0.0) throw std::runtime_error("relative_entropy: negative distribution value");
    return phase_space_integral(dom, F.n_cells, [&](int c, int j) {
        const double x = F.at(c, j) / dom.mu[j];
        return (xlogx(x) - x + 1.0) * dom.mu[j];
    });
}

double relative_entropy_raw(const GridFunction& F, const Domain& dom) {
    return phase_space_integral(dom, F.n_cells, [&](int c, int j) {
        return xlogx(F.at(c, j)) - xlogx(dom.mu[j]);
    });
}

double boltzmann_H(const GridFunction& F, const Domain& dom) {
    return phase_space_integral(dom, F.n_cells, [&](int c, int j) { return xlogx(F.at(c, j)); });
}

double entropy_split(const GridFunction& f, const Domain& dom) {
    return phase_space_integral(dom, f.n_cells, [&](int c, int j) {
        const double a = std::abs(f.at(c, j));
        const double m = dom.mu[j];
        return a <= m ? 0.25 * a * a / m : 0.25 * a;
    });
}

double macro_deviation(const MacroFields& fields) {
    double dev = 0.0;
    for (int c = 0; c < fields.n_cells(); ++c) {
        const auto& U = fields.U[c];
        const double u = std::sqrt(U[0] * U[0] + U[1] * U[1] + U[2] * U[2]);
        dev = std::max({dev, std::abs(fields.rho[c] - 1.0), u, std::abs(fields.T[c] - 1.0)});
    }
    return dev;
}

double pp_ratio(const GridFunction& F, const MacroFields& fields) {
    double fmax = 0.0;
    for (double v : F.values) fmax = std::max(fmax, std::abs(v));
    if (fmax == 0.0) return 0.0;
    double r = 0.0;
    for (int c = 0; c < fields.n_cells(); ++c)
        r = std::max(r, fields.rho[c] / std::pow(fields.T[c], 1.5));
    return r / fmax;
}

ConservedTotals conserved_totals(const GridFunction& F, const Domain& dom) {
    ConservedTotals t;
    t.mass = phase_space_integral(dom, F.n_cells, [&](int c, int j) { return F.at(c, j); });
    for (int d = 0; d < 3; ++d)
        t.momentum[d] = phase_space_integral(
            dom, F.n_cells, [&](int c, int j) { return dom.vel.nodes[j][d] * F.at(c, j); });
    t.energy =
        phase_space_integral(dom, F.n_cells, [&](int c, int j) { return dom.vel.speed2[j] * F.at(c, j); });
    return t;
}

double moment_bound_constant(double q) {
    if (!(q > 5.0)) throw std::invalid_argument("moment_bound_constant: requires q > 5");
    return 0.2 + 1.0 / (q - 5.0);
}

double t_eq_predicted(double M0, double delta, double q) {
    if (!(q > 10.0)) throw std::invalid_argument("t_eq_predicted: requires q > 10");
    if (!(delta > 0.0 && delta < 1.0 / 3.0))
        throw std::invalid_argument("t_eq_predicted: requires 0 < delta < 1/3");
    if (!(M0 > 0.0)) throw std::invalid_argument("t_eq_predicted: requires M0 > 0");
    return std::log(4.0 * moment_bound_constant(q) * M0 / delta);
}

MomentBoundReport moment_bound_check(const GridFunction& F, double q, const Domain& dom) {
    MomentBoundReport rep;
    rep.c_q = moment_bound_constant(q);
    rep.weighted_norm = weighted_linf_norm(F, q, dom);
    const MacroFields fields = compute_moments(F, dom.vel);
    for (int c = 0; c < fields.n_cells(); ++c) {
        const auto& m = fields.rhoU[c];
        const double mom = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
        const auto& U = fields.U[c];
        const double u2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
        const double en = 3.0 * fields.rho[c] * fields.T[c] + fields.rho[c] * u2;
        rep.lhs_max[0] = std::max(rep.lhs_max[0], fields.rho[c]);
        rep.lhs_max[1] = std::max(rep.lhs_max[1], mom);
        rep.lhs_max[2] = std::max(rep.lhs_max[2], en);
    }
    const double rhs = rep.c_q * rep.weighted_norm;
    for (double lhs : rep.lhs_max) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    rep.pass = rep.max_ratio <= 1.0;
    return rep;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series, double t_start) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, y] : series) {
        if (t < t_start) continue;
        if (!(y > 0.0)) throw std::runtime_error("fit_decay_rate: non-positive norm in fit window");
        pts.emplace_back(t, std::log(y));
    }
    if (pts.size() < 10)
        throw std::runtime_error("fit_decay_rate: needs at least 10 samples with t >= t_start, got " +
                                 std::to_string(pts.size()));
    double st = 0.0, sy = 0.0;
    for (const auto& [t, y] : pts) {
        st += t;
        sy += y;
    }
    const double n = static_cast<double>(pts.size());
    const double tbar = st / n, ybar = sy / n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (const auto& [t, y] : pts) {
        stt += (t - tbar) * (t - tbar);
        sty += (t - tbar) * (y - ybar);
        syy += (y - ybar) * (y - ybar);
    }
    DecayFit fit;
    fit.n_used = static_cast<int>(pts.size());
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    fit.k = -slope;
    fit.C = std::exp(ybar - slope * tbar);
    // variance below the rounding floor of the mean means flat data, which the
    // constant fits exactly
    const double flat_floor = 1e-20 * n * (ybar * ybar + 1.0);
    if (syy <= flat_floor) {
        fit.r2 = 1.0;
    } else {
        double ssres = 0.0;
        for (const auto& [t, y] : pts) {
            const double e = y - (ybar + slope * (t - tbar));
            ssres += e * e;
        }
        fit.r2 = 1.0 - ssres / syy;
    }
    return fit;
}

DiagnosticsRecord compute_record(const GridFunction& F, const MacroFields& fields, double time, double q,
                                 const Domain& dom) {
    DiagnosticsRecord r;
    r.time = time;
    const auto totals = conserved_totals(F, dom);
    r.mass = totals.mass;
    r.momentum = totals.momentum;
    r.energy = totals.energy;
    r.boltzmann_H = boltzmann_H(F, dom);
    r.relative_entropy = relative_entropy(F, dom);
    GridFunction f(F.n_cells, F.n_nodes);
    parallel_for(static_cast<std::size_t>(F.n_cells), [&](std::size_t c) {
        double* o = f.cell_data(static_cast<int>(c));
        const double* s = F.cell_data(static_cast<int>(c));
        for (int j = 0; j < F.n_nodes; ++j) o[j] = s[j] - dom.mu[j];
    });
    r.entropy_split = entropy_split(f, dom);
    r.linf_q_norm = weighted_linf_norm(f, q, dom);
    r.macro_deviation = macro_deviation(fields);
    r.pp_ratio = pp_ratio(F, fields);
    return r;
}

std::string csv_header() {
    return "time,mass,mom_x,mom_y,mom_z,energy,H,rel_entropy,entropy_split,linf_q,macro_dev,pp_ratio";
}

std::string csv_row(const DiagnosticsRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.time,
                  r.mass, r.momentum[0], r.momentum[1], r.momentum[2], r.energy, r.boltzmann_H,
                  r.relative_entropy, r.entropy_split, r.linf_q_norm, r.macro_deviation, r.pp_ratio);
    return buf;
}

void write_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    os << csv_header() << "\n";
    for (const auto& r : records) os << csv_row(r) << "\n";
}

std::string RegimeReport::to_text() const {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(9);
    os << "regime report\n";
    os << "  q                : " << q << "\n";
    os << "  delta            : " << delta << "\n";
    os << "  M0 (||f0||_inf,q): " << M0 << "\n";
    os << "  t_eq_predicted   : " << t_eq_predicted << "\n";
    if (crossed)
        os << "  t_delta_crossing : " << t_delta_crossing << "  (macro deviation stays <= 2 delta)\n";
    else
        os << "  t_delta_crossing : not reached\n";
    return os.str();
}

}  // namespace bgk
