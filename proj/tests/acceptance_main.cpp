/// @file acceptance_main.cpp
/// @brief End-to-end acceptance suite. Prints one PASS/FAIL line per
///        criterion and exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bgk/config.hpp"
#include "bgk/diagnostics.hpp"
#include "bgk/linearization.hpp"
#include "bgk/snapshot.hpp"
#include "bgk/solver.hpp"
#include "bgk/verify.hpp"

using namespace bgk;

namespace {

int g_failures = 0;

class Timer {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
};

void criterion(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("criterion %02d %-28s %s  %s\n", id, name.c_str(), ok ? "PASS" : "FAIL",
                detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
    return buf;
}

void random_bump_state(Rng& rng, const Domain& dom, GridFunction& F, bool tight = false) {
    // `tight` keeps the realized moments inside rho in [0.5,2], |U| <= 1,
    // T in [0.5,2], the ranges the identity criterion is stated for.
    const double rho = rng.uniform(0.55, tight ? 1.55 : 1.9);
    const double T = rng.uniform(0.55, tight ? 1.55 : 1.9);
    const double um = tight ? 0.5 : 0.55;
    const Vec3 U{rng.uniform(-um, um), rng.uniform(-um, um), rng.uniform(-um, um)};
    const double amp = rng.uniform(0.1, tight ? 0.4 : 0.45);
    const double cm = tight ? 1.0 : 1.5;
    const Vec3 c{rng.uniform(-cm, cm), rng.uniform(-cm, cm), rng.uniform(-cm, cm)};
    const double w2 = rng.uniform(0.6, 2.0);
    for (int j = 0; j < dom.n_nodes(); ++j) {
        const Vec3& v = dom.vel.nodes[j];
        const double d2 = (v[0] - c[0]) * (v[0] - c[0]) + (v[1] - c[1]) * (v[1] - c[1]) +
                          (v[2] - c[2]) * (v[2] - c[2]);
        F.at(0, j) = eval_maxwellian(rho, U, T, v) * (1.0 + amp * std::exp(-d2 / w2));
    }
}

SimConfig base_config(Scenario sc, int cells, int nodes) {
    SimConfig cfg;
    cfg.dims = 1;
    cfg.cells_per_axis = cells;
    cfg.nodes_per_axis = nodes;
    cfg.v_max = 8.0;
    cfg.a = 1.0;
    cfg.b = 0.0;
    cfg.q = 12.0;
    cfg.delta = 0.1;
    cfg.dt = 0.05;
    cfg.t_final = 10.0;
    cfg.scenario = sc;
    cfg.record_every = 1;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const std::uint64_t seed = 42;

    // ----- 1: cancellation ---------------------------------------------------
    {
        Timer timer;
        Rng rng(seed);
        Domain dom = make_domain(1, 2, 24, 8.0);
        GridFunction F(1, dom.n_nodes());
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            random_bump_state(rng, dom, F);
            const MacroFields fields = compute_moments(F, dom.vel);
            const GridFunction M = discrete_maxwellian(fields, dom.vel);
            GridFunction diff(1, dom.n_nodes());
            for (int j = 0; j < dom.n_nodes(); ++j) diff.at(0, j) = M.at(0, j) - F.at(0, j);
            const auto kappa = brackets(diff.cell_data(0), dom);
            for (int i = 0; i < 5; ++i)
                worst = std::max(worst, std::abs(kappa[i]) / std::max(fields.rho[0], 1.0));
        }
        const double secs = timer.seconds();
        criterion(1, "cancellation", worst <= 1e-12 && secs <= 10.0,
                  fmt("max moment residual %.3e (tol 1e-12), %.1f s (limit 10 s)", worst, secs));
    }

    // ----- 2 + 3: conservation and H-theorem on the pinned run ---------------
    {
        Timer timer;
        Domain dom = make_domain(1, 64, 24, 8.0);
        SimConfig cfg = base_config(Scenario::NearEquilibrium, 64, 24);
        const RunResult res = run(cfg, dom, scenario_initial_data(cfg, dom));
        const auto& recs = res.records;
        double dm = 0.0, de = 0.0, dp = 0.0, hviol = 0.0;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            dm = std::max(dm, std::abs(recs[i].mass - recs[0].mass) / std::abs(recs[0].mass));
            de = std::max(de, std::abs(recs[i].energy - recs[0].energy) / std::abs(recs[0].energy));
            for (int d = 0; d < 3; ++d)
                dp = std::max(dp, std::abs(recs[i].momentum[d] - recs[0].momentum[d]));
            if (i > 0) hviol = std::max(hviol, recs[i].boltzmann_H - recs[i - 1].boltzmann_H);
        }
        const double secs = timer.seconds();
        criterion(2, "conservation",
                  dm <= 1e-10 && de <= 1e-10 && dp <= 1e-10 && secs <= 120.0,
                  fmt("drift mass %.2e energy %.2e momentum %.2e (tol 1e-10)", dm, de, dp));
        criterion(3, "h_theorem", hviol <= 1e-12,
                  fmt("max per-step H increase %.2e (tol 1e-12), 200 steps", hviol));
    }

    // ----- 4 + 6b: linearization identity and P annihilates Gamma ------------
    double worst_pgamma = 0.0;
    {
        Timer timer;
        Rng rng(seed + 1);
        Domain dom = make_domain(1, 2, 40, 12.0);
        GridFunction F(1, dom.n_nodes());
        double worst = 0.0;
        bool in_range = true;
        const double ab[4][2] = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {1.0, 0.5}};
        for (const auto& p : ab)
            for (int k = 0; k < 3; ++k) {
                random_bump_state(rng, dom, F, /*tight=*/true);
                const MacroFields m = compute_moments(F, dom.vel);
                const auto& U = m.U[0];
                const double u = std::sqrt(U[0] * U[0] + U[1] * U[1] + U[2] * U[2]);
                in_range = in_range && m.rho[0] >= 0.5 && m.rho[0] <= 2.0 && m.T[0] >= 0.5 &&
                           m.T[0] <= 2.0 && u <= 1.0;
                const IdentityReport rep = verify_linearization_identity(F, p[0], p[1], 32, dom);
                worst = std::max(worst, rep.relative_residual);
                worst_pgamma = std::max(worst_pgamma, rep.relative_P_gamma);
            }
        const double secs = timer.seconds();
        criterion(4, "linearization_identity", worst <= 1e-6 && in_range && secs <= 60.0,
                  fmt("relative residual %.3e (tol 1e-6), states in range, %.1f s (limit 60 s)",
                      worst, secs));
    }

    // ----- 5: Hessian vs finite differences ----------------------------------
    {
        Timer timer;
        const SuiteResult hs = suite_hessian(seed);
        const double secs = timer.seconds();
        criterion(5, "hessian_fd_symmetry", hs.pass && secs <= 30.0,
                  fmt("suite pass, %.1f s (limit 30 s)", secs));
    }

    // ----- 6: projection -----------------------------------------------------
    {
        Rng rng(seed + 2);
        Domain dom = make_domain(1, 2, 24, 8.0);
        GridFunction f(1, dom.n_nodes());
        double worst_idem = 0.0;
        for (int k = 0; k < 5; ++k) {
            double coef[5];
            for (double& x : coef) x = rng.uniform(-1.0, 1.0);
            for (int j = 0; j < dom.n_nodes(); ++j) {
                const Vec3& v = dom.vel.nodes[j];
                double poly = coef[0] + coef[4] * dom.vel.speed2[j];
                for (int d = 0; d < 3; ++d) poly += coef[1 + d] * v[d];
                f.at(0, j) = poly * dom.mu[j];
            }
            const GridFunction Pf = project_P(f, dom);
            const GridFunction PPf = project_P(Pf, dom);
            double num = 0.0, den = 0.0;
            for (double v : f.values) den = std::max(den, std::abs(v));
            for (int j = 0; j < dom.n_nodes(); ++j)
                num = std::max(num, std::abs(PPf.at(0, j) - Pf.at(0, j)));
            worst_idem = std::max(worst_idem, num / den);
        }
        criterion(6, "projection", worst_idem <= 1e-10 && worst_pgamma <= 1e-8,
                  fmt("idempotence %.3e (tol 1e-10), P(Gamma) %.3e (tol 1e-8)", worst_idem,
                      worst_pgamma));
    }

    // ----- 7: entropy split bound and monotonicity ---------------------------
    {
        double split_excess = -1e300, mono = 0.0;
        for (const Scenario sc :
             {Scenario::Equilibrium, Scenario::NearEquilibrium, Scenario::LargeAmplitude}) {
            Domain dom = make_domain(1, 32, 20, 8.0);
            SimConfig cfg = base_config(sc, 32, 20);
            cfg.t_final = 6.0;
            const RunResult res = run(cfg, dom, scenario_initial_data(cfg, dom));
            const double e0 = res.records.front().relative_entropy;
            for (std::size_t i = 0; i < res.records.size(); ++i) {
                split_excess = std::max(split_excess, res.records[i].entropy_split - e0);
                if (i > 0)
                    mono = std::max(mono, res.records[i].relative_entropy -
                                              res.records[i - 1].relative_entropy);
            }
        }
        criterion(7, "entropy_split_bound", split_excess <= 1e-8 && mono <= 1e-12,
                  fmt("split excess %.2e (tol 1e-8), entropy step increase %.2e (tol 1e-12)",
                      split_excess, mono));
    }

    // ----- 8: macroscopic moment upper bound ----------------------------------
    {
        Rng rng(seed + 3);
        Domain dom = make_domain(1, 2, 24, 8.0);
        GridFunction F(1, dom.n_nodes());
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            random_bump_state(rng, dom, F);
            worst = std::max(worst, moment_bound_check(F, 12.0, dom).max_ratio);
        }
        criterion(8, "moment_upper_bound", worst <= 1.0,
                  fmt("max ratio %.3e with C_q = 12/35 at q = 12 (tol 1)", worst));
    }

    // ----- 9: decay and regime transition ------------------------------------
    {
        Timer timer;
        Domain dom = make_domain(1, 32, 24, 8.0);
        SimConfig near = base_config(Scenario::NearEquilibrium, 32, 24);
        near.fit_t_start = 1.0;
        const RunResult rn = run(near, dom, scenario_initial_data(near, dom));
        const bool near_ok = rn.decay && rn.decay->k > 0.0 && rn.decay->r2 >= 0.95;

        SimConfig large = base_config(Scenario::LargeAmplitude, 32, 24);
        const RunResult rl = run(large, dom, scenario_initial_data(large, dom));
        const double teq_formula =
            std::log(4.0 * (12.0 / 35.0) * rl.regime.M0 / large.delta);
        const bool large_ok = rl.regime.crossed &&
                              std::abs(rl.regime.t_eq_predicted - teq_formula) <= 1e-12;
        const double secs = timer.seconds();
        criterion(9, "decay_and_regime", near_ok && large_ok && secs <= 300.0,
                  fmt("k=%.3f r2=%.4f; crossing t=%.2f vs t_eq=%.2f",
                      rn.decay ? rn.decay->k : -1.0, rn.decay ? rn.decay->r2 : -1.0,
                      rl.regime.t_delta_crossing, rl.regime.t_eq_predicted));
    }

    // ----- 10: determinism and snapshot round-trip ----------------------------
    {
        const std::string rep1 = suites_report(run_suites("all", seed));
        const std::string rep2 = suites_report(run_suites("all", seed));
        const bool reports_equal = rep1 == rep2 && !rep1.empty();
        const bool suites_pass = rep1.find("ALL PASS") != std::string::npos;

        Domain dom = make_domain(1, 16, 16, 7.0);
        SimConfig cfg = base_config(Scenario::LargeAmplitude, 16, 16);
        cfg.v_max = 7.0;
        GridFunction F0 = scenario_initial_data(cfg, dom);
        Snapshot snap;
        snap.dims = 1;
        snap.cells_per_axis = 16;
        snap.nodes_per_axis = 16;
        snap.v_max = 7.0;
        snap.time = 0.0;
        snap.values = F0.values;
        save_snapshot("acc_snap_a.bin", snap);
        save_snapshot("acc_snap_b.bin", load_snapshot("acc_snap_a.bin"));
        const bool roundtrip = slurp("acc_snap_a.bin") == slurp("acc_snap_b.bin") &&
                               !slurp("acc_snap_a.bin").empty();
        std::remove("acc_snap_a.bin");
        std::remove("acc_snap_b.bin");

        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "verify-all reports identical=%d, suites pass=%d, snapshot bit-exact=%d",
                      reports_equal ? 1 : 0, suites_pass ? 1 : 0, roundtrip ? 1 : 0);
        criterion(10, "determinism_and_snapshot", reports_equal && suites_pass && roundtrip, detail);
    }

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria PASS\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
