#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bgk/diagnostics.hpp"
#include "bgk/fields.hpp"
#include "bgk/verify.hpp"

using namespace bgk;

namespace {

GridFunction mu_field(const Domain& dom, int cells) {
    GridFunction F(cells, dom.n_nodes());
    for (int c = 0; c < cells; ++c)
        for (int j = 0; j < dom.n_nodes(); ++j) F.at(c, j) = dom.mu[j];
    return F;
}

}  // namespace

TEST_CASE("weighted L-inf norm") {
    const Domain dom = make_domain(1, 2, 24, 8.0);
    const int nv = dom.n_nodes();

    GridFunction zero(1, nv);
    CHECK(weighted_linf_norm(zero, 12.0, dom) == 0.0);

    // q = 0: the weight is <v>^0 = 1 + |v|^0 = 2 everywhere
    GridFunction f = mu_field(dom, 1);
    double mu_max = 0.0;
    for (int j = 0; j < nv; ++j) mu_max = std::max(mu_max, dom.mu[j]);
    CHECK(weighted_linf_norm(f, 0.0, dom) == doctest::Approx(2.0 * mu_max).epsilon(1e-15));
    // the grid max sits close to the continuous peak value 2 (2 pi)^{-3/2}
    CHECK(weighted_linf_norm(f, 0.0, dom) ==
          doctest::Approx(2.0 * std::pow(2.0 * M_PI, -1.5)).epsilon(0.2));

    // single far node dominates at q = 12
    GridFunction g(1, nv);
    int far = 0;
    for (int j = 0; j < nv; ++j)
        if (dom.vel.speed2[j] > dom.vel.speed2[far]) far = j;
    g.at(0, far) = 1e-3;
    const double r = std::sqrt(dom.vel.speed2[far]);
    CHECK(weighted_linf_norm(g, 12.0, dom) ==
          doctest::Approx(1e-3 * (1.0 + std::pow(r, 12.0))).epsilon(1e-14));

    CHECK_THROWS(weighted_linf_norm(g, -1.0, dom));
}

TEST_CASE("relative entropy") {
    const Domain dom = make_domain(1, 2, 24, 8.0);
    GridFunction F = mu_field(dom, 2);
    CHECK(std::abs(relative_entropy(F, dom)) <= 1e-14);

    // discrete Maxwellian with rho = 1.2: psi-form equals 1.2 ln 1.2 - 0.2
    GridFunction M(2, dom.n_nodes());
    for (int c = 0; c < 2; ++c)
        discrete_maxwellian_cell({1.2, 0.0, 0.0, 0.0, 3.6}, dom.vel, M.cell_data(c));
    CHECK(relative_entropy(M, dom) ==
          doctest::Approx(1.2 * std::log(1.2) - 0.2).epsilon(1e-8));
    CHECK(relative_entropy(M, dom) >= 0.0);

    GridFunction neg = F;
    neg.at(0, 0) = -1e-3;
    CHECK_THROWS(relative_entropy(neg, dom));
}

TEST_CASE("raw and psi relative entropy agree on invariant-sharing states") {
    const Domain dom = make_domain(1, 4, 20, 8.0);
    GridFunction F(4, dom.n_nodes());
    // mu plus a zero-invariant perturbation (odd sine profile in x)
    for (int c = 0; c < 4; ++c)
        for (int j = 0; j < dom.n_nodes(); ++j) {
            const double sx = std::sin(2.0 * M_PI * dom.space.center(c));
            F.at(c, j) = dom.mu[j] * (1.0 + 0.2 * sx * std::exp(-0.5 * dom.vel.speed2[j]));
        }
    const double raw = relative_entropy_raw(F, dom);
    const double psi = relative_entropy(F, dom);
    CHECK(raw == doctest::Approx(psi).epsilon(1e-10));
}

TEST_CASE("entropy split branches and boundary tie-break") {
    const Domain dom = make_domain(1, 2, 24, 8.0);
    const int nv = dom.n_nodes();
    const int nc = dom.space.cell_count;
    GridFunction zero(nc, nv);
    CHECK(entropy_split(zero, dom) == 0.0);

    // f = mu: |f| = mu everywhere is the boundary case, quadratic branch,
    // value (1/4) * discrete mass of mu = 1/4 over the unit torus
    GridFunction f(nc, nv);
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < nv; ++j) f.at(c, j) = dom.mu[j];
    CHECK(entropy_split(f, dom) == doctest::Approx(0.25).epsilon(1e-12));

    // just above the boundary the L1 branch takes over
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < nv; ++j) f.at(c, j) = 2.0 * dom.mu[j];
    CHECK(entropy_split(f, dom) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("macro deviation") {
    MacroFields m;
    m.resize(2);
    m.rho = {1.0, 1.0};
    m.T = {1.0, 1.0};
    m.U[0] = m.U[1] = {0, 0, 0};
    CHECK(macro_deviation(m) == 0.0);
    m.rho[1] = 1.1;
    CHECK(macro_deviation(m) == doctest::Approx(0.1));

    const Domain dom = make_domain(1, 2, 24, 8.0);
    GridFunction F(1, dom.n_nodes());
    for (int j = 0; j < dom.n_nodes(); ++j)
        F.at(0, j) = dom.mu[j] * (1.0 + 0.05 * dom.vel.nodes[j][0]);
    const MacroFields mf = compute_moments(F, dom.vel);
    CHECK(macro_deviation(mf) == doctest::Approx(0.05).epsilon(0.05));
}

TEST_CASE("t_eq formula") {
    // C_q = 1/5 + 1/7 = 12/35; t_eq = ln(4 * (12/35) * 10 / 0.1) = ln(960/7)
    CHECK(moment_bound_constant(12.0) == doctest::Approx(12.0 / 35.0).epsilon(1e-15));
    CHECK(t_eq_predicted(10.0, 0.1, 12.0) == doctest::Approx(4.9210231354065686).epsilon(1e-12));

    // inverse: 4 C_q M0 / delta = e gives t_eq = 1
    const double cq = moment_bound_constant(12.0);
    const double M0 = M_E * 0.1 / (4.0 * cq);
    CHECK(t_eq_predicted(M0, 0.1, 12.0) == doctest::Approx(1.0).epsilon(1e-13));

    // doubling M0 adds exactly ln 2
    CHECK(t_eq_predicted(2.0 * M0, 0.1, 12.0) - t_eq_predicted(M0, 0.1, 12.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS(t_eq_predicted(1.0, 0.1, 10.0));   // q too small
    CHECK_THROWS(t_eq_predicted(1.0, 0.5, 12.0));   // delta out of range
    CHECK_THROWS(t_eq_predicted(-1.0, 0.1, 12.0));  // M0 <= 0
}

TEST_CASE("moment upper bound check") {
    const Domain dom = make_domain(1, 2, 24, 8.0);
    GridFunction F = mu_field(dom, 2);
    const MomentBoundReport rep = moment_bound_check(F, 12.0, dom);
    CHECK(rep.pass);
    CHECK(rep.max_ratio < 1.0);

    // q -> 5+ blows up C_q and the ratios collapse
    const MomentBoundReport tight = moment_bound_check(F, 5.0001, dom);
    CHECK(tight.c_q > 9999.0);
    CHECK(tight.max_ratio < 1e-2);
    CHECK(tight.max_ratio > 0.0);

    CHECK_THROWS(moment_bound_check(F, 5.0, dom));
}

TEST_CASE("decay rate fit") {
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i < 20; ++i) {
        const double t = 0.5 * i;
        series.emplace_back(t, 3.0 * std::exp(-0.7 * t));
    }
    const DecayFit fit = fit_decay_rate(series, 0.0);
    CHECK(fit.k == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(fit.C == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

    // 1% multiplicative noise: k within 5%, r2 still high
    Rng rng(3);
    std::vector<std::pair<double, double>> noisy;
    for (int i = 0; i < 40; ++i) {
        const double t = 0.25 * i;
        noisy.emplace_back(t, 3.0 * std::exp(-0.7 * t) * (1.0 + 0.01 * rng.uniform(-1, 1)));
    }
    const DecayFit nf = fit_decay_rate(noisy, 0.0);
    CHECK(nf.k == doctest::Approx(0.7).epsilon(0.05));
    CHECK(nf.r2 >= 0.99);

    // constant series: zero slope, flat data fit exactly
    std::vector<std::pair<double, double>> flat;
    for (int i = 0; i < 15; ++i) flat.emplace_back(0.1 * i, 2.5);
    const DecayFit ff = fit_decay_rate(flat, 0.0);
    CHECK(ff.k == doctest::Approx(0.0));
    CHECK(ff.r2 == doctest::Approx(1.0));

    CHECK_THROWS(fit_decay_rate(series, 100.0));  // too few points in window
    std::vector<std::pair<double, double>> bad = series;
    bad[5].second = 0.0;
    CHECK_THROWS(fit_decay_rate(bad, 0.0));  // cannot take log
}

TEST_CASE("CSV header and 17-significant-digit round trip") {
    CHECK(csv_header() ==
          "time,mass,mom_x,mom_y,mom_z,energy,H,rel_entropy,entropy_split,linf_q,macro_dev,pp_ratio");
    DiagnosticsRecord r;
    r.time = 1.0 / 3.0;
    r.mass = M_PI;
    r.momentum = {1e-17, -2.5e-13, 0.0};
    r.energy = 3.0000000000000004;
    r.boltzmann_H = -3.9;
    r.relative_entropy = 1.2345678901234567e-11;
    r.entropy_split = 5e-12;
    r.linf_q_norm = 0.01;
    r.macro_deviation = 0.3;
    r.pp_ratio = 2.0;
    const std::string row = csv_row(r);
    // parse back: every field must reproduce its double bit-for-bit
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= row.size()) {
        const auto comma = row.find(',', pos);
        vals.push_back(std::strtod(row.substr(pos, comma - pos).c_str(), nullptr));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    REQUIRE(vals.size() == 12);
    CHECK(vals[0] == r.time);
    CHECK(vals[1] == r.mass);
    CHECK(vals[2] == r.momentum[0]);
    CHECK(vals[3] == r.momentum[1]);
    CHECK(vals[5] == r.energy);
    CHECK(vals[7] == r.relative_entropy);
}

TEST_CASE("conserved totals agree with cellwise moments") {
    const Domain dom = make_domain(1, 4, 20, 8.0);
    GridFunction F(4, dom.n_nodes());
    for (int c = 0; c < 4; ++c)
        for (int j = 0; j < dom.n_nodes(); ++j)
            F.at(c, j) = dom.mu[j] * (1.0 + 0.1 * std::sin(2.0 * M_PI * dom.space.center(c)));
    const ConservedTotals t = conserved_totals(F, dom);
    const MacroFields m = compute_moments(F, dom.vel);
    double mass = 0.0;
    for (int c = 0; c < 4; ++c) mass += m.rho[c];
    mass *= dom.cell_volume();
    CHECK(t.mass == doctest::Approx(mass).epsilon(1e-14));
}
