#include "bgk/linearization.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bgk/quadrature.hpp"
#include "bgk/reduce.hpp"

namespace bgk {

namespace {

const double kSqrt23 = std::sqrt(2.0 / 3.0);

// B[k][j] = d w_k / d c_j: inverse Jacobian of the map
// w = (rho, U, T) -> c = (rho, rho U, G), plus its primitive derivatives.
struct ChainRule {
    double B[5][5] = {};
    // dB[l][k][j] = d B[k][j] / d w_l (only the handful of nonzero entries)
    double dB[5][5][5] = {};

    explicit ChainRule(const ThetaFields& s) {
        const double r = s.rho, T = s.T;
        const double u2 = s.U[0] * s.U[0] + s.U[1] * s.U[1] + s.U[2] * s.U[2];
        B[0][0] = 1.0;
        for (int i = 0; i < 3; ++i) {
            B[1 + i][0] = -s.U[i] / r;
            B[1 + i][1 + i] = 1.0 / r;
            B[4][1 + i] = -(2.0 / 3.0) * s.U[i] / r;
        }
        B[4][0] = (u2 - 3.0 * T + 3.0) / (3.0 * r);
        B[4][4] = kSqrt23 / r;

        for (int i = 0; i < 3; ++i) {
            dB[0][1 + i][0] = s.U[i] / (r * r);
            dB[1 + i][1 + i][0] = -1.0 / r;
            dB[0][1 + i][1 + i] = -1.0 / (r * r);
            dB[0][4][1 + i] = (2.0 / 3.0) * s.U[i] / (r * r);
            dB[1 + i][4][1 + i] = -(2.0 / 3.0) / r;
            dB[1 + i][4][0] = 2.0 * s.U[i] / (3.0 * r);
        }
        dB[0][4][0] = -(u2 - 3.0 * T + 3.0) / (3.0 * r * r);
        dB[4][4][0] = -1.0 / r;
        dB[0][4][4] = -kSqrt23 / (r * r);
    }
};

}  // namespace

ThetaFields theta_transition(const CellState& s, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("theta_transition: theta must lie in [0,1]");
    ThetaFields tf;
    tf.theta = theta;
    tf.rho = theta * s.rho + (1.0 - theta);
    const double G = conserved_G_from_primitive(s.rho, s.U, s.T);
    tf.G = theta * G;
    Vec3 m;
    for (int d = 0; d < 3; ++d) m[d] = theta * s.rho * s.U[d];
    const CellState prim = primitive_from_conserved(tf.rho, m, tf.G);  // throws on T <= 0
    tf.U = prim.U;
    tf.T = prim.T;
    return tf;
}

std::array<double, 5> a_coefficients(const ThetaFields& tf, double a, double b) {
    if (!(tf.rho > 0.0 && tf.T > 0.0))
        throw std::invalid_argument("a_coefficients: requires rho_theta > 0 and T_theta > 0");
    const double r = tf.rho, T = tf.T;
    const double u2 = tf.U[0] * tf.U[0] + tf.U[1] * tf.U[1] + tf.U[2] * tf.U[2];
    const double ra1 = std::pow(r, a - 1.0);
    const double Tb1 = std::pow(T, b - 1.0);
    std::array<double, 5> A;
    A[0] = ra1 * Tb1 * (a * T + (b / 3.0) * (u2 - 3.0 * T + 3.0));
    for (int i = 0; i < 3; ++i) A[1 + i] = -(2.0 / 3.0) * b * ra1 * tf.U[i] * Tb1;
    A[4] = kSqrt23 * b * ra1 * Tb1;
    return A;
}

Hessian5 hessian_M(const ThetaFields& tf, const Vec3& v) {
    if (!(tf.rho > 0.0 && tf.T > 0.0))
        throw std::invalid_argument("hessian_M: requires rho_theta > 0 and T_theta > 0");
    const double r = tf.rho, T = tf.T;
    const Vec3 c{v[0] - tf.U[0], v[1] - tf.U[1], v[2] - tf.U[2]};
    const double cc = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    const double M = r * std::pow(2.0 * M_PI * T, -1.5) * std::exp(-cc / (2.0 * T));
    const double s = cc / (2.0 * T * T) - 1.5 / T;

    // primitive-variable log-derivatives of M
    const double dln[5] = {1.0 / r, c[0] / T, c[1] / T, c[2] / T, s};
    double d2ln[5][5] = {};
    d2ln[0][0] = -1.0 / (r * r);
    for (int i = 0; i < 3; ++i) {
        d2ln[1 + i][1 + i] = -1.0 / T;
        d2ln[1 + i][4] = d2ln[4][1 + i] = -c[i] / (T * T);
    }
    d2ln[4][4] = 1.5 / (T * T) - cc / (T * T * T);

    const ChainRule cr(tf);
    Hessian5 H{};
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            double acc = 0.0;
            for (int l = 0; l < 5; ++l) {
                if (cr.B[l][i] == 0.0) continue;
                double inner = 0.0;
                for (int k = 0; k < 5; ++k) {
                    if (cr.dB[l][k][j] != 0.0) inner += cr.dB[l][k][j] * dln[k];
                    if (cr.B[k][j] != 0.0) inner += cr.B[k][j] * (dln[l] * dln[k] + d2ln[l][k]);
                }
                acc += cr.B[l][i] * inner;
            }
            H[i][j] = acc * M;
        }
    }
    return H;
}

std::array<double, 5> brackets(const double* f_cell, const Domain& dom) {
    const std::size_t nv = static_cast<std::size_t>(dom.n_nodes());
    std::array<double, 5> kappa;
    for (int i = 0; i < 5; ++i) {
        const double* ei = dom.basis.e[i].data();
        kappa[i] = dom.vel.weight *
                   pairwise_sum(std::size_t{0}, nv, [&](std::size_t j) { return f_cell[j] * ei[j]; });
    }
    return kappa;
}

GridFunction project_P(const GridFunction& f, const Domain& dom) {
    GridFunction out(f.n_cells, f.n_nodes);
    parallel_for(static_cast<std::size_t>(f.n_cells), [&](std::size_t c) {
        const auto kappa = brackets(f.cell_data(static_cast<int>(c)), dom);
        double* o = out.cell_data(static_cast<int>(c));
        for (int j = 0; j < f.n_nodes; ++j) {
            double acc = 0.0;
            for (int i = 0; i < 5; ++i) acc += kappa[i] * dom.basis.e[i][j];
            o[j] = acc * dom.mu[j];
        }
    });
    return out;
}

GridFunction gamma1(const GridFunction& f, const MacroFields& fields, double a, double b, int n_theta,
                    const Domain& dom) {
    if (n_theta < 1) throw std::invalid_argument("gamma1: n_theta must be positive");
    const auto q = gauss_legendre_01(n_theta);
    const GridFunction Pf = project_P(f, dom);
    GridFunction out(f.n_cells, f.n_nodes);
    parallel_for(static_cast<std::size_t>(f.n_cells), [&](std::size_t c) {
        const CellState s = fields.cell(static_cast<int>(c));
        const auto kappa = brackets(f.cell_data(static_cast<int>(c)), dom);
        std::array<double, 5> Aint{};
        for (int t = 0; t < n_theta; ++t) {
            const auto A = a_coefficients(theta_transition(s, q.nodes[t]), a, b);
            for (int i = 0; i < 5; ++i) Aint[i] += q.weights[t] * A[i];
        }
        double eta = 0.0;
        for (int i = 0; i < 5; ++i) eta += Aint[i] * kappa[i];
        const double* fp = f.cell_data(static_cast<int>(c));
        const double* pp = Pf.cell_data(static_cast<int>(c));
        double* o = out.cell_data(static_cast<int>(c));
        for (int j = 0; j < f.n_nodes; ++j) o[j] = (pp[j] - fp[j]) * eta;
    });
    return out;
}

namespace {

double hessian_quadratic(const ThetaFields& tf, const Vec3& v, const std::array<double, 5>& kappa) {
    const Hessian5 H = hessian_M(tf, v);
    double quad = 0.0;
    for (int i = 0; i < 5; ++i) {
        double row = 0.0;
        for (int k = 0; k < 5; ++k) row += H[i][k] * kappa[k];
        quad += kappa[i] * row;
    }
    return quad;
}

}  // namespace

GridFunction gamma2(const GridFunction& f, const MacroFields& fields, double a, double b, int n_theta,
                    const Domain& dom) {
    if (n_theta < 1) throw std::invalid_argument("gamma2: n_theta must be positive");
    const auto q = gauss_legendre_01(n_theta);
    GridFunction out(f.n_cells, f.n_nodes);
    for (int c = 0; c < f.n_cells; ++c) {
        const CellState s = fields.cell(c);
        const double nu = std::pow(s.rho, a) * std::pow(s.T, b);
        const auto kappa = brackets(f.cell_data(c), dom);
        std::vector<ThetaFields> path(n_theta);
        for (int t = 0; t < n_theta; ++t) path[t] = theta_transition(s, q.nodes[t]);
        double* o = out.cell_data(c);
        parallel_for(static_cast<std::size_t>(f.n_nodes), [&](std::size_t j) {
            double acc = 0.0;
            for (int t = 0; t < n_theta; ++t)
                acc += q.weights[t] * (1.0 - q.nodes[t]) *
                       hessian_quadratic(path[t], dom.vel.nodes[j], kappa);
            o[j] = nu * acc;
        });
    }
    return out;
}

IdentityReport verify_linearization_identity(const GridFunction& F, double a, double b, int n_theta,
                                             const Domain& dom) {
    const MacroFields fields = compute_moments(F, dom.vel);
    const GridFunction M = discrete_maxwellian(fields, dom.vel);
    const std::vector<double> nu = collision_frequency(fields, a, b);

    GridFunction f(F.n_cells, F.n_nodes);
    for (int c = 0; c < F.n_cells; ++c)
        for (int j = 0; j < F.n_nodes; ++j) f.at(c, j) = F.at(c, j) - dom.mu[j];

    const GridFunction Pf = project_P(f, dom);
    const GridFunction G1 = gamma1(f, fields, a, b, n_theta, dom);
    const GridFunction G2 = gamma2(f, fields, a, b, n_theta, dom);

    IdentityReport rep;
    rep.cells.resize(F.n_cells);
    double sumsq = 0.0;
    double linf_g1 = 0.0, linf_g2 = 0.0, linf_pff = 0.0;
    for (int c = 0; c < F.n_cells; ++c) {
        double cell_lhs = 0.0, cell_res = 0.0;
        for (int j = 0; j < F.n_nodes; ++j) {
            const double lhs = nu[c] * (M.at(c, j) - F.at(c, j));
            const double pff = Pf.at(c, j) - f.at(c, j);
            const double r = lhs - pff - G1.at(c, j) - G2.at(c, j);
            cell_lhs = std::max(cell_lhs, std::abs(lhs));
            cell_res = std::max(cell_res, std::abs(r));
            sumsq += r * r;
            linf_pff = std::max(linf_pff, std::abs(pff));
            linf_g1 = std::max(linf_g1, std::abs(G1.at(c, j)));
            linf_g2 = std::max(linf_g2, std::abs(G2.at(c, j)));
        }
        rep.cells[c].cell = c;
        rep.cells[c].max_residual = cell_res;
        rep.cells[c].relative_residual = cell_lhs > 0.0 ? cell_res / cell_lhs : 0.0;
        rep.linf_lhs = std::max(rep.linf_lhs, cell_lhs);
        rep.linf_residual = std::max(rep.linf_residual, cell_res);
    }
    rep.l2_residual =
        std::sqrt(sumsq * dom.cell_volume() * dom.vel.weight);
    rep.linf_terms = std::max({rep.linf_lhs, linf_pff, linf_g1, linf_g2});
    rep.relative_residual = rep.linf_lhs > 0.0 ? rep.linf_residual / rep.linf_lhs : 0.0;
    rep.relative_to_terms = rep.linf_terms > 0.0 ? rep.linf_residual / rep.linf_terms : 0.0;

    GridFunction gsum(F.n_cells, F.n_nodes);
    for (int c = 0; c < F.n_cells; ++c)
        for (int j = 0; j < F.n_nodes; ++j) gsum.at(c, j) = G1.at(c, j) + G2.at(c, j);
    const GridFunction PG = project_P(gsum, dom);
    for (double v : PG.values) rep.linf_P_gamma = std::max(rep.linf_P_gamma, std::abs(v));
    rep.relative_P_gamma = rep.linf_lhs > 0.0 ? rep.linf_P_gamma / rep.linf_lhs : 0.0;
    return rep;
}

std::string IdentityReport::to_text() const {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(6);
    os << "# cell  max_residual  relative_residual\n";
    for (const auto& row : cells)
        os << row.cell << "  " << row.max_residual << "  " << row.relative_residual << "\n";
    os << "# linf_residual " << linf_residual << "  l2_residual " << l2_residual << "  relative "
       << relative_residual << "\n";
    return os.str();
}

}  // namespace bgk
