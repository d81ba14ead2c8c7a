#include "bgk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "bgk/linearization.hpp"
#include "bgk/reduce.hpp"
#include "bgk/snapshot.hpp"

namespace bgk {

Scenario scenario_from_string(const std::string& name) {
    if (name == "equilibrium") return Scenario::Equilibrium;
    if (name == "near-equilibrium") return Scenario::NearEquilibrium;
    if (name == "large-amplitude") return Scenario::LargeAmplitude;
    if (name == "custom") return Scenario::Custom;
    throw std::invalid_argument("unknown scenario '" + name +
                                "' (expected equilibrium, near-equilibrium, large-amplitude, custom)");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Equilibrium: return "equilibrium";
        case Scenario::NearEquilibrium: return "near-equilibrium";
        case Scenario::LargeAmplitude: return "large-amplitude";
        case Scenario::Custom: return "custom";
    }
    return "?";
}

std::vector<std::string> SimConfig::validate() const {
    std::vector<std::string> errs;
    if (dims < 1 || dims > 3) errs.push_back("dims must be 1, 2 or 3");
    if (cells_per_axis < 2) errs.push_back("cells_per_axis must be >= 2");
    if (nodes_per_axis < 4 || nodes_per_axis % 2 != 0)
        errs.push_back("nodes_per_axis must be even and >= 4");
    if (!(v_max > 0.0)) errs.push_back("v_max must be positive");
    if (!(a >= b && b >= 0.0))
        errs.push_back("collision-frequency exponents must satisfy a >= b >= 0 (nu = rho^a T^b)");
    if (!(q > 10.0)) errs.push_back("q must be > 10 for regime analysis");
    if (!(delta > 0.0 && delta < 1.0 / 3.0)) errs.push_back("delta must lie in (0, 1/3)");
    if (!(dt > 0.0)) errs.push_back("dt must be positive");
    if (!(t_final > 0.0)) errs.push_back("t_final must be positive");
    if (dt > 0.0 && t_final > 0.0) {
        const double steps = t_final / dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
            errs.push_back("t_final must be an integer number of dt steps");
    }
    if (n_theta < 1) errs.push_back("n_theta must be >= 1");
    if (record_every < 1) errs.push_back("record_every must be >= 1");
    if (scenario == Scenario::Custom && snapshot_in.empty())
        errs.push_back("scenario custom requires snapshot_in");
    return errs;
}

// ============================================================================
// Transport
// ============================================================================

namespace {

/// Cubic Lagrange weights at fractional offset t in [0,1) for the stencil
/// {-1, 0, 1, 2}. The base value enters through the difference form
/// out = f0 + w[-1](f[-1]-f0) + w[1](f[1]-f0) + w[2](f[2]-f0), which keeps
/// constants bitwise unchanged and the partition of unity exact.
struct CubicWeights {
    double wm1, wp1, wp2;
    explicit CubicWeights(double t)
        : wm1(-t * (t - 1.0) * (t - 2.0) / 6.0),
          wp1(-(t + 1.0) * t * (t - 2.0) / 2.0),
          wp2((t + 1.0) * t * (t - 1.0) / 6.0) {}
};

void advect_axis(GridFunction& F, int axis, double dt, const Domain& dom) {
    const SpatialGrid& sg = dom.space;
    const int n = sg.cells_per_axis;
    const int nv = dom.n_nodes();
    // stride between consecutive cells along `axis` in the flattened index
    int stride = 1;
    for (int d = 0; d < axis; ++d) stride *= sg.extent(d);
    const int lines = sg.cell_count / n;

    parallel_for(static_cast<std::size_t>(nv), [&](std::size_t node) {
        const double d = dom.vel.nodes[node][axis] * dt / sg.dx;  // shift in cells
        const double md = -d;
        const long K = static_cast<long>(std::floor(md));
        const double t = md - static_cast<double>(K);
        const CubicWeights w(t);
        const bool lattice = (t == 0.0);

        std::vector<double> line(n);
        for (int l = 0; l < lines; ++l) {
            // first cell of this line: distribute the non-axis coordinates
            const int block = l / stride;
            const int offset = l % stride;
            const int base_cell = block * stride * n + offset;
            for (int i = 0; i < n; ++i) line[i] = F.at(base_cell + i * stride, static_cast<int>(node));
            for (int i = 0; i < n; ++i) {
                const int p = sg.wrap(static_cast<int>(i + K));
                double v;
                if (lattice) {
                    v = line[p];
                } else {
                    const double f0 = line[p];
                    v = f0 + w.wm1 * (line[sg.wrap(p - 1)] - f0) + w.wp1 * (line[sg.wrap(p + 1)] - f0) +
                        w.wp2 * (line[sg.wrap(p + 2)] - f0);
                }
                F.at(base_cell + i * stride, static_cast<int>(node)) = v;
            }
        }
    });
}

/// Clamp negative values to zero; returns the (positive) mass added.
double clamp_negative(GridFunction& F, const Domain& dom) {
    std::vector<double> partial(F.n_cells, 0.0);
    parallel_for(static_cast<std::size_t>(F.n_cells), [&](std::size_t c) {
        double acc = 0.0;
        double* p = F.cell_data(static_cast<int>(c));
        for (int j = 0; j < F.n_nodes; ++j) {
            if (p[j] < 0.0) {
                acc -= p[j];
                p[j] = 0.0;
            }
        }
        partial[c] = acc;
    });
    return dom.cell_volume() * dom.vel.weight * pairwise_sum(partial);
}

}  // namespace

GridFunction step_transport(const GridFunction& F, double dt, const Domain& dom) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_transport: dt must be positive");
    GridFunction out = F;
    for (int axis = 0; axis < dom.space.dims; ++axis) advect_axis(out, axis, dt, dom);
    return out;
}

GridFunction step_relax(const GridFunction& F, double dt, double a, double b, const Domain& dom) {
    const MacroFields fields = compute_moments(F, dom.vel);
    const std::vector<double> nu = collision_frequency(fields, a, b);
    GridFunction out(F.n_cells, F.n_nodes);
    std::vector<std::string> failures(F.n_cells);
    parallel_for(static_cast<std::size_t>(F.n_cells), [&](std::size_t c) {
        const int ci = static_cast<int>(c);
        const double rho = fields.rho[ci];
        const auto& U = fields.U[ci];
        const double u2 = U[0] * U[0] + U[1] * U[1] + U[2] * U[2];
        const std::array<double, 5> target = {rho, fields.rhoU[ci][0], fields.rhoU[ci][1],
                                              fields.rhoU[ci][2], rho * u2 + 3.0 * rho * fields.T[ci]};
        double* M = out.cell_data(ci);
        try {
            discrete_maxwellian_cell(target, dom.vel, M);
        } catch (const std::exception& ex) {
            failures[c] = std::string(ex.what()) + " (cell " + std::to_string(ci) + ")";
            return;
        }
        const double lam = std::exp(-nu[ci] * dt);
        const double* f = F.cell_data(ci);
        for (int j = 0; j < F.n_nodes; ++j) M[j] = lam * f[j] + (1.0 - lam) * M[j];
    });
    for (const auto& msg : failures)
        if (!msg.empty()) throw std::runtime_error(msg);
    return out;
}

void strang_step(SolverState& state, const SimConfig& config, const Domain& dom) {
    const double half = 0.5 * config.dt;
    state.F = step_transport(state.F, half, dom);
    double clamped = clamp_negative(state.F, dom);
    state.F = step_relax(state.F, config.dt, config.a, config.b, dom);
    state.F = step_transport(state.F, half, dom);
    clamped += clamp_negative(state.F, dom);

    state.clamped_mass_last_step = clamped;
    state.clamped_mass_total += clamped;
    state.fields_cache = compute_moments(state.F, dom.vel);
    state.time += config.dt;
    state.step_count += 1;

    double mass = 0.0;
    for (int c = 0; c < state.fields_cache.n_cells(); ++c) mass += state.fields_cache.rho[c];
    mass *= dom.cell_volume();
    if (clamped > 1e-8 * mass) {
        char buf[112];
        std::snprintf(buf, sizeof(buf),
                      "strang_step: clamped mass %.3e exceeds 1e-8 of total mass (resolution inadequate)",
                      clamped);
        throw std::runtime_error(buf);
    }
}

// ============================================================================
// Scenarios
// ============================================================================

namespace {

/// Smooth even velocity profile concentrated where mu is large.
double bump_profile(const Vec3& v) {
    const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return std::exp(-0.5 * r2);
}

}  // namespace

GridFunction scenario_initial_data(const SimConfig& config, const Domain& dom) {
    const int nc = dom.space.cell_count;
    const int nv = dom.n_nodes();
    GridFunction F(nc, nv);

    switch (config.scenario) {
        case Scenario::Equilibrium: {
            for (int c = 0; c < nc; ++c)
                for (int j = 0; j < nv; ++j) F.at(c, j) = dom.mu[j];
            return F;
        }
        case Scenario::NearEquilibrium: {
            // f0 = amp * sin(2 pi x1) (1 + v1) mu with amp chosen so that
            // ||f0||_{inf,q} = 0.01.
            GridFunction f(nc, nv);
            for (int c = 0; c < nc; ++c) {
                const double x = dom.space.center(dom.space.coords(c)[0]);
                const double sx = std::sin(2.0 * M_PI * x);
                for (int j = 0; j < nv; ++j)
                    f.at(c, j) = sx * (1.0 + dom.vel.nodes[j][0]) * dom.mu[j];
            }
            const double amp = 0.01 / weighted_linf_norm(f, config.q, dom);
            for (int c = 0; c < nc; ++c)
                for (int j = 0; j < nv; ++j) F.at(c, j) = dom.mu[j] + amp * f.at(c, j);
            return F;
        }
        case Scenario::LargeAmplitude: {
            // F0 = mu (1 + A sin(2 pi x1) s(v)) with s even and concentrated at
            // small |v|: pointwise-large perturbation, small relative entropy.
            const double A = 0.9;
            for (int c = 0; c < nc; ++c) {
                const double x = dom.space.center(dom.space.coords(c)[0]);
                const double sx = std::sin(2.0 * M_PI * x);
                for (int j = 0; j < nv; ++j)
                    F.at(c, j) = dom.mu[j] * (1.0 + A * sx * bump_profile(dom.vel.nodes[j]));
            }
            return F;
        }
        case Scenario::Custom: {
            Snapshot snap = load_snapshot(config.snapshot_in);
            if (snap.dims != config.dims || snap.cells_per_axis != config.cells_per_axis ||
                snap.nodes_per_axis != config.nodes_per_axis || snap.v_max != config.v_max)
                throw std::runtime_error("scenario custom: snapshot grid metadata does not match config");
            F.values = std::move(snap.values);
            return F;
        }
    }
    throw std::logic_error("scenario_initial_data: unreachable");
}

double normalize_invariants(GridFunction& F0, const Domain& dom) {
    // total brackets of f0 = F0 - mu, averaged over the torus (volume 1)
    const int nc = F0.n_cells;
    const int nv = F0.n_nodes;
    GridFunction f(nc, nv);
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < nv; ++j) f.at(c, j) = F0.at(c, j) - dom.mu[j];
    std::array<double, 5> total{};
    for (int c = 0; c < nc; ++c) {
        const auto kap = brackets(f.cell_data(c), dom);
        for (int i = 0; i < 5; ++i) total[i] += kap[i];
    }
    for (int i = 0; i < 5; ++i) total[i] *= dom.cell_volume();

    // Solve the Gram system so the correction removes the invariants exactly
    // even with the finite-grid Gram deviation.
    double Gm[5][5];
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            Gm[i][j] = dom.vel.weight *
                       pairwise_sum(std::size_t{0}, static_cast<std::size_t>(nv), [&](std::size_t k) {
                           return dom.basis.e[i][k] * dom.basis.e[j][k] * dom.mu[k];
                       });
    // Gaussian elimination (5x5, symmetric positive definite)
    double rhs[5];
    for (int i = 0; i < 5; ++i) rhs[i] = total[i];
    double coef[5];
    {
        double A[5][6];
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) A[i][j] = Gm[i][j];
            A[i][5] = rhs[i];
        }
        for (int k = 0; k < 5; ++k) {
            int p = k;
            for (int i = k + 1; i < 5; ++i)
                if (std::abs(A[i][k]) > std::abs(A[p][k])) p = i;
            std::swap(A[k], A[p]);
            for (int i = k + 1; i < 5; ++i) {
                const double m = A[i][k] / A[k][k];
                for (int j = k; j < 6; ++j) A[i][j] -= m * A[k][j];
            }
        }
        for (int i = 4; i >= 0; --i) {
            coef[i] = A[i][5];
            for (int j = i + 1; j < 5; ++j) coef[i] -= A[i][j] * coef[j];
            coef[i] /= A[i][i];
        }
    }

    // largest fraction of the correction that keeps F0 >= 0
    double scale = 1.0;
    std::vector<double> corr(nv);
    for (int j = 0; j < nv; ++j) {
        double acc = 0.0;
        for (int i = 0; i < 5; ++i) acc += coef[i] * dom.basis.e[i][j];
        corr[j] = acc * dom.mu[j];
    }
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < nv; ++j) {
            const double val = F0.at(c, j);
            if (corr[j] > 0.0 && val < corr[j]) scale = std::min(scale, val / corr[j]);
        }
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < nv; ++j) F0.at(c, j) -= scale * corr[j];
    return scale;
}

// ============================================================================
// Run loop
// ============================================================================

RunResult run(const SimConfig& config, const Domain& dom, GridFunction F0) {
    for (double v : F0.values)
        if (v < 0.0) throw std::runtime_error("run: initial data has negative values");

    RunResult result;
    if (config.normalize) {
        const double applied = normalize_invariants(F0, dom);
        if (applied < 1.0)
            result.warnings.push_back("invariant normalization scaled to " + std::to_string(applied) +
                                      " to preserve positivity");
    }

    auto boundary_check = [&](const MacroFields& fields, const char* when) {
        double worst = 0.0;
        for (int c = 0; c < fields.n_cells(); ++c)
            worst = std::max(worst,
                             maxwellian_boundary_mass_fraction(fields.cell(c), dom.vel.v_max));
        if (worst > 1e-8)
            result.warnings.push_back(std::string("Maxwellian mass outside the velocity box is ") +
                                      std::to_string(worst) + " of rho " + when +
                                      "; the truncation is no longer faithful");
    };

    // ||f0||_{inf,q} defines M0 for the regime report
    GridFunction f0(F0.n_cells, F0.n_nodes);
    for (int c = 0; c < F0.n_cells; ++c)
        for (int j = 0; j < F0.n_nodes; ++j) f0.at(c, j) = F0.at(c, j) - dom.mu[j];
    const double M0 = weighted_linf_norm(f0, config.q, dom);

    SolverState state;
    state.F = std::move(F0);
    state.fields_cache = compute_moments(state.F, dom.vel);
    boundary_check(state.fields_cache, "at t = 0");

    std::vector<DiagnosticsRecord> records;
    records.push_back(compute_record(state.F, state.fields_cache, 0.0, config.q, dom));

    const long n_steps = std::lround(config.t_final / config.dt);
    for (long s = 0; s < n_steps; ++s) {
        strang_step(state, config, dom);
        for (double v : state.F.values)
            if (!std::isfinite(v))
                throw std::runtime_error("run: non-finite value detected at step " +
                                         std::to_string(state.step_count));
        if (state.step_count % config.record_every == 0 || s + 1 == n_steps)
            records.push_back(
                compute_record(state.F, state.fields_cache, state.time, config.q, dom));
    }
    boundary_check(state.fields_cache, "at t_final");

    // regime report: last record with macro_dev > 2 delta; crossing is the next one
    RegimeReport regime;
    regime.delta = config.delta;
    regime.q = config.q;
    regime.M0 = M0;
    regime.t_eq_predicted =
        M0 > 0.0 ? std::log(4.0 * moment_bound_constant(config.q) * M0 / config.delta)
                 : 0.0;
    const double threshold = 2.0 * config.delta;
    int last_above = -1;
    for (int i = 0; i < static_cast<int>(records.size()); ++i)
        if (records[i].macro_deviation > threshold) last_above = i;
    if (last_above + 1 < static_cast<int>(records.size())) {
        regime.crossed = true;
        regime.t_delta_crossing = records[last_above + 1].time;
    }
    result.regime = regime;

    // decay fit on the weighted norm
    double t_start = config.fit_t_start;
    if (t_start < 0.0) t_start = std::max(0.0, regime.t_eq_predicted);
    std::vector<std::pair<double, double>> series;
    for (const auto& r : records) series.emplace_back(r.time, r.linf_q_norm);
    try {
        result.decay = fit_decay_rate(series, t_start);
    } catch (const std::exception& ex) {
        result.decay_error = ex.what();
    }

    result.state = std::move(state);
    result.records = std::move(records);
    return result;
}

double sampled_free_transport_density_min(const GridFunction& F0, const Domain& dom) {
    double worst = std::numeric_limits<double>::max();
    for (int t = 0; t <= 10; ++t) {
        GridFunction Ft = t == 0 ? F0 : step_transport(F0, static_cast<double>(t), dom);
        for (int c = 0; c < Ft.n_cells; ++c) {
            const double rho =
                dom.vel.weight * pairwise_sum(std::size_t{0}, static_cast<std::size_t>(Ft.n_nodes),
                                              [&](std::size_t j) { return Ft.cell_data(c)[j]; });
            worst = std::min(worst, rho);
        }
    }
    return worst;
}

}  // namespace bgk
