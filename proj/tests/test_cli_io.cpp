#include <doctest.h>

#include <cmath>
#include <string>

#include "bgk/config.hpp"
#include "bgk/svg.hpp"
#include "bgk/verify.hpp"

using namespace bgk;

namespace {

const char* kGoodConfig = R"(
# near-equilibrium example
scenario = near-equilibrium
a = 1.0
b = 0.0
q = 12
delta = 0.1
dt = 0.05
t_final = 2.0
cells_per_axis = 16
nodes_per_axis = 16
v_max = 7.0
)";

}  // namespace

TEST_CASE("config parsing happy path with defaults echoed") {
    const ConfigParse p = parse_config_text(kGoodConfig);
    REQUIRE(p.ok());
    CHECK(p.config.scenario == Scenario::NearEquilibrium);
    CHECK(p.config.q == 12.0);
    CHECK(p.config.n_theta == 32);       // default
    CHECK(p.config.record_every == 1);   // default
    const auto echo = config_echo(p.config);
    bool has_ntheta = false;
    for (const auto& [k, v] : echo) has_ntheta |= (k == "n_theta" && v == "32");
    CHECK(has_ntheta);
}

TEST_CASE("config parsing rejects physics violations with named constraints") {
    std::string bad = kGoodConfig;
    bad += "\nb = 2.0\n";  // duplicate key AND a < b
    const ConfigParse p = parse_config_text(bad);
    CHECK(!p.ok());
    bool dup = false;
    for (const auto& e : p.errors) dup |= e.find("duplicate") != std::string::npos;
    CHECK(dup);

    const ConfigParse q = parse_config_text(
        "scenario = equilibrium\na = 0.5\nb = 1.0\nq = 12\ndelta = 0.1\ndt = 0.05\nt_final = 1\n");
    CHECK(!q.ok());
    bool named = false;
    for (const auto& e : q.errors) named |= e.find("a >= b") != std::string::npos;
    CHECK(named);

    const ConfigParse r = parse_config_text(
        "scenario = equilibrium\na = 1\nb = 0\nq = 12\ndelta = 0.1\ndt = -0.05\nt_final = 1\n");
    CHECK(!r.ok());

    // every missing required physical key is reported
    const ConfigParse s = parse_config_text("scenario = equilibrium\n");
    CHECK(s.errors.size() >= 6);

    const ConfigParse t = parse_config_text(std::string(kGoodConfig) + "\nmystery = 1\n");
    CHECK(!t.ok());
}

TEST_CASE("svg renders polylines, guides, and log scale") {
    SvgSeries s;
    s.label = "macro_dev";
    for (int i = 0; i <= 10; ++i) {
        s.x.push_back(0.1 * i);
        s.y.push_back(0.3 * std::exp(-0.5 * i));
    }
    SvgOptions opt;
    opt.title = "test";
    opt.draw_guide = true;
    opt.guide_y = 0.2;
    const std::string svg = render_line_chart({s}, opt);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("guide") != std::string::npos);
    CHECK(svg.find("macro_dev") != std::string::npos);

    // log scale drops non-positive samples instead of emitting NaN coordinates
    s.y[3] = 0.0;
    opt.log_y = true;
    const std::string logsvg = render_line_chart({s}, opt);
    CHECK(logsvg.find("nan") == std::string::npos);
    CHECK(logsvg.find("inf") == std::string::npos);
}

TEST_CASE("verify suites are deterministic for a fixed seed") {
    const auto a = run_suites("hessian", 42);
    const auto b = run_suites("hessian", 42);
    CHECK(suites_report(a) == suites_report(b));
    CHECK_THROWS(run_suites("nonsense", 0));
    CHECK(known_suite("all"));
    CHECK(!known_suite("everything"));
}
