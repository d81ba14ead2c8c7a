#include "bgk/fields.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "bgk/reduce.hpp"

namespace bgk {

namespace {

// Solve the symmetric 5x5 system J x = r in place (partial-pivot LU).
void solve5(double J[5][5], double r[5], double x[5]) {
    int piv[5] = {0, 1, 2, 3, 4};
    for (int k = 0; k < 5; ++k) {
        int p = k;
        for (int i = k + 1; i < 5; ++i)
            if (std::abs(J[piv[i]][k]) > std::abs(J[piv[p]][k])) p = i;
        std::swap(piv[k], piv[p]);
        const double d = J[piv[k]][k];
        if (d == 0.0) throw std::runtime_error("discrete_maxwellian: singular moment Jacobian");
        for (int i = k + 1; i < 5; ++i) {
            const double m = J[piv[i]][k] / d;
            J[piv[i]][k] = m;
            for (int j = k + 1; j < 5; ++j) J[piv[i]][j] -= m * J[piv[k]][j];
        }
    }
    double y[5];
    for (int i = 0; i < 5; ++i) {
        y[i] = r[piv[i]];
        for (int j = 0; j < i; ++j) y[i] -= J[piv[i]][j] * y[j];
    }
    for (int i = 4; i >= 0; --i) {
        x[i] = y[i];
        for (int j = i + 1; j < 5; ++j) x[i] -= J[piv[i]][j] * x[j];
        x[i] /= J[piv[i]][i];
    }
}

// Raw moments (rho, rho U, E) of a node array by pairwise quadrature.
std::array<double, 5> raw_moments(const double* g, const VelocityGrid& vel) {
    const std::size_t nv = static_cast<std::size_t>(vel.count());
    std::array<double, 5> m;
    m[0] = vel.weight * pairwise_sum(std::size_t{0}, nv, [&](std::size_t j) { return g[j]; });
    for (int d = 0; d < 3; ++d)
        m[1 + d] = vel.weight *
                   pairwise_sum(std::size_t{0}, nv, [&](std::size_t j) { return vel.nodes[j][d] * g[j]; });
    m[4] = vel.weight * pairwise_sum(std::size_t{0}, nv, [&](std::size_t j) { return vel.speed2[j] * g[j]; });
    return m;
}

constexpr int kNewtonMaxIter = 50;
constexpr double kNewtonTol = 1e-13;  // scaled residual target

}  // namespace

double conserved_G_from_primitive(double rho, const Vec3& U, double T) {
    const double u2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
    return (rho * u2 + 3.0 * rho * T - 3.0 * rho) / std::sqrt(6.0);
}

CellState primitive_from_conserved(double rho, const Vec3& rhoU, double G) {
    if (!(rho > 0.0)) throw std::runtime_error("primitive_from_conserved: non-positive density");
    CellState s;
    s.rho = rho;
    const double m2 = rhoU[0] * rhoU[0] + rhoU[1] * rhoU[1] + rhoU[2] * rhoU[2];
    for (int d = 0; d < 3; ++d) s.U[d] = rhoU[d] / rho;
    s.T = std::sqrt(2.0 / 3.0) * G / rho - m2 / (3.0 * rho * rho) + 1.0;
    if (!(s.T > 0.0))
        throw std::runtime_error("primitive_from_conserved: non-positive temperature T=" + std::to_string(s.T));
    return s;
}

MacroFields compute_moments(const GridFunction& F, const VelocityGrid& vel) {
    MacroFields out;
    out.resize(F.n_cells);
    std::vector<std::string> failures(F.n_cells);
    parallel_for(static_cast<std::size_t>(F.n_cells), [&](std::size_t c) {
        const auto m = raw_moments(F.cell_data(static_cast<int>(c)), vel);
        if (!(m[0] > 0.0)) {
            failures[c] = "compute_moments: non-positive density " + std::to_string(m[0]) + " in cell " +
                          std::to_string(c);
            return;
        }
        out.rho[c] = m[0];
        for (int d = 0; d < 3; ++d) {
            out.rhoU[c][d] = m[1 + d];
            out.U[c][d] = m[1 + d] / m[0];
        }
        const double u2 =
            out.U[c][0] * out.U[c][0] + out.U[c][1] * out.U[c][1] + out.U[c][2] * out.U[c][2];
        out.T[c] = (m[4] - m[0] * u2) / (3.0 * m[0]);
        if (!(out.T[c] > 0.0)) {
            failures[c] = "compute_moments: non-positive temperature " + std::to_string(out.T[c]) +
                          " in cell " + std::to_string(c);
            return;
        }
        out.G[c] = (m[4] - 3.0 * m[0]) / std::sqrt(6.0);
    });
    for (const auto& msg : failures)
        if (!msg.empty()) throw std::runtime_error(msg);
    return out;
}

std::vector<double> collision_frequency(const MacroFields& fields, double a, double b) {
    if (!(a >= b && b >= 0.0))
        throw std::invalid_argument("collision_frequency: exponents must satisfy a >= b >= 0");
    std::vector<double> nu(fields.n_cells());
    for (int c = 0; c < fields.n_cells(); ++c) nu[c] = std::pow(fields.rho[c], a) * std::pow(fields.T[c], b);
    return nu;
}

double eval_maxwellian(double rho, const Vec3& U, double T, const Vec3& v) {
    const double dx = v[0] - U[0], dy = v[1] - U[1], dz = v[2] - U[2];
    const double r2 = dx * dx + dy * dy + dz * dz;
    return rho * std::pow(2.0 * M_PI * T, -1.5) * std::exp(-r2 / (2.0 * T));
}

double maxwellian_boundary_mass_fraction(const CellState& s, double v_max) {
    double inside = 1.0;
    const double denom = std::sqrt(2.0 * s.T);
    for (int d = 0; d < 3; ++d) {
        const double lo = (v_max + s.U[d]) / denom;
        const double hi = (v_max - s.U[d]) / denom;
        inside *= 0.5 * (std::erf(lo) + std::erf(hi));
    }
    return 1.0 - inside;
}

DiscreteMaxwellianParams discrete_maxwellian_cell(const std::array<double, 5>& target,
                                                  const VelocityGrid& vel, double* out) {
    const int nv = vel.count();
    const double rho = target[0];
    if (!(rho > 0.0)) throw std::runtime_error("discrete_maxwellian: non-positive target density");
    Vec3 U;
    for (int d = 0; d < 3; ++d) U[d] = target[1 + d] / rho;
    const double u2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
    const double T = (target[4] - rho * u2) / (3.0 * rho);
    if (!(T > 0.0)) throw std::runtime_error("discrete_maxwellian: non-positive target temperature");

    DiscreteMaxwellianParams p;
    p.alpha = std::log(rho) - 1.5 * std::log(2.0 * M_PI * T) - u2 / (2.0 * T);
    for (int d = 0; d < 3; ++d) p.beta[d] = U[d] / T;
    p.gamma = -1.0 / (2.0 * T);
    p.boundary_mass_fraction = maxwellian_boundary_mass_fraction(CellState{rho, U, T}, vel.v_max);
    p.boundary_warning = p.boundary_mass_fraction > 1e-8;

    double scale[5];
    for (int k = 0; k < 5; ++k) scale[k] = std::max({1.0, rho, std::abs(target[k])});

    auto evaluate = [&](const DiscreteMaxwellianParams& q) {
        for (int j = 0; j < nv; ++j) {
            const auto& v = vel.nodes[j];
            out[j] = std::exp(q.alpha + q.beta[0] * v[0] + q.beta[1] * v[1] + q.beta[2] * v[2] +
                              q.gamma * vel.speed2[j]);
        }
    };
    auto scaled_residual = [&](const std::array<double, 5>& m) {
        double r = 0.0;
        for (int k = 0; k < 5; ++k) r = std::max(r, std::abs(m[k] - target[k]) / scale[k]);
        return r;
    };

    evaluate(p);
    auto m = raw_moments(out, vel);
    double res = scaled_residual(m);

    for (p.iterations = 0; p.iterations < kNewtonMaxIter && res > kNewtonTol; ++p.iterations) {
        // Moment Jacobian J[k][l] = <g psi_k psi_l>, psi = (1, v, |v|^2).
        double J[5][5] = {};
        for (int j = 0; j < nv; ++j) {
            const auto& v = vel.nodes[j];
            const double psi[5] = {1.0, v[0], v[1], v[2], vel.speed2[j]};
            const double g = out[j];
            for (int k = 0; k < 5; ++k)
                for (int l = k; l < 5; ++l) J[k][l] += g * psi[k] * psi[l];
        }
        for (int k = 0; k < 5; ++k)
            for (int l = 0; l < k; ++l) J[k][l] = J[l][k];
        for (int k = 0; k < 5; ++k)
            for (int l = 0; l < 5; ++l) J[k][l] *= vel.weight;

        double r[5], dp[5];
        for (int k = 0; k < 5; ++k) r[k] = target[k] - m[k];
        solve5(J, r, dp);

        // step halving if the scaled residual does not decrease
        double lambda = 1.0;
        DiscreteMaxwellianParams best = p;
        double best_res = res;
        for (int half = 0; half < 30; ++half) {
            DiscreteMaxwellianParams q = p;
            q.alpha += lambda * dp[0];
            for (int d = 0; d < 3; ++d) q.beta[d] += lambda * dp[1 + d];
            q.gamma += lambda * dp[4];
            if (q.gamma < 0.0) {
                evaluate(q);
                const auto mq = raw_moments(out, vel);
                const double rq = scaled_residual(mq);
                if (rq < best_res) {
                    best = q;
                    best_res = rq;
                    m = mq;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (best_res >= res && p.iterations > 0) break;  // stagnated at the rounding floor
        p.alpha = best.alpha;
        p.beta = best.beta;
        p.gamma = best.gamma;
        res = best_res;
    }
    if (!(p.gamma < 0.0)) throw std::runtime_error("discrete_maxwellian: non-negative gamma exponent");
    if (res > 1e-12) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "discrete_maxwellian: Newton did not converge, residual %.3e",
                      res);
        throw std::runtime_error(buf);
    }
    evaluate(p);
    p.residual = res;
    return p;
}

GridFunction discrete_maxwellian(const MacroFields& fields, const VelocityGrid& vel,
                                 std::vector<DiscreteMaxwellianParams>* params) {
    const int nc = fields.n_cells();
    GridFunction M(nc, vel.count());
    if (params) params->resize(nc);
    std::vector<std::string> failures(nc);
    parallel_for(static_cast<std::size_t>(nc), [&](std::size_t c) {
        const double rho = fields.rho[c];
        const auto& U = fields.U[c];
        const double u2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
        const std::array<double, 5> target = {rho, fields.rhoU[c][0], fields.rhoU[c][1], fields.rhoU[c][2],
                                              rho * u2 + 3.0 * rho * fields.T[c]};
        try {
            auto p = discrete_maxwellian_cell(target, vel, M.cell_data(static_cast<int>(c)));
            if (params) (*params)[c] = p;
        } catch (const std::exception& ex) {
            failures[c] = std::string(ex.what()) + " (cell " + std::to_string(c) + ")";
        }
    });
    for (const auto& msg : failures)
        if (!msg.empty()) throw std::runtime_error(msg);
    return M;
}

double Domain::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < space.dims; ++d) v *= space.dx;
    return v;
}

Domain make_domain(int dims, int cells_per_axis, int nodes_per_axis, double v_max) {
    Domain dom;
    dom.space = build_spatial_grid(dims, cells_per_axis);
    dom.vel = build_velocity_grid(nodes_per_axis, v_max);
    dom.basis = collision_basis(dom.vel);
    dom.mu.resize(dom.vel.count());
    dom.mu_params = discrete_maxwellian_cell({1.0, 0.0, 0.0, 0.0, 3.0}, dom.vel, dom.mu.data());
    return dom;
}

}  // namespace bgk
