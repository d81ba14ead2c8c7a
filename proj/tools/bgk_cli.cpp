/// @file bgk_cli.cpp
/// @brief Batch front end: run scenarios, verify property suites, plot CSV
///        columns as SVG, save/load snapshots.
///
/// Exit codes: 0 success, 1 runtime abort, 2 usage/config error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bgk/config.hpp"
#include "bgk/snapshot.hpp"
#include "bgk/solver.hpp"
#include "bgk/svg.hpp"
#include "bgk/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeAbort = 1;
constexpr int kUsageError = 2;

struct Timings {
    std::vector<std::pair<std::string, double>> phases;
    std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();
    void lap(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        phases.emplace_back(name, std::chrono::duration<double>(now - mark).count());
        mark = now;
    }
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open CSV " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.columns.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.columns.size())
            throw std::runtime_error("ragged CSV row in " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

int cmd_run(const std::string& config_path, const std::string& out_override, bool resume) {
    bgk::ConfigParse parsed = bgk::parse_config_file(config_path);
    if (!parsed.ok()) {
        std::cerr << "config error(s) in " << config_path << ":\n";
        for (const auto& e : parsed.errors) std::cerr << "  - " << e << "\n";
        return kUsageError;
    }
    bgk::SimConfig cfg = parsed.config;
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (cfg.out_dir.empty()) cfg.out_dir = "runs/" + bgk::scenario_name(cfg.scenario);

    const fs::path dir(cfg.out_dir);
    const fs::path manifest_path = dir / "manifest.json";
    if (resume && fs::exists(manifest_path)) {
        std::cerr << "refusing to overwrite existing artifacts in " << cfg.out_dir
                  << " (--resume)\n";
        return kUsageError;
    }
    fs::create_directories(dir);

    try {
        Timings timings;
        bgk::Domain dom =
            bgk::make_domain(cfg.dims, cfg.cells_per_axis, cfg.nodes_per_axis, cfg.v_max);
        timings.lap("setup");

        bgk::GridFunction F0 = bgk::scenario_initial_data(cfg, dom);
        bgk::RunResult res = bgk::run(cfg, dom, std::move(F0));
        timings.lap("run");

        std::vector<std::string> artifacts;
        const std::string csv_path = (dir / "diagnostics.csv").string();
        bgk::write_csv(csv_path, res.records);
        artifacts.push_back(csv_path);

        const std::string regime_path = (dir / "regime_report.txt").string();
        {
            std::ofstream os(regime_path);
            os << res.regime.to_text();
        }
        artifacts.push_back(regime_path);

        if (!cfg.snapshot_out.empty()) {
            bgk::Snapshot snap;
            snap.dims = cfg.dims;
            snap.cells_per_axis = cfg.cells_per_axis;
            snap.nodes_per_axis = cfg.nodes_per_axis;
            snap.v_max = cfg.v_max;
            snap.time = res.state.time;
            snap.values = res.state.F.values;
            bgk::save_snapshot(cfg.snapshot_out, snap);
            artifacts.push_back(cfg.snapshot_out);
        }

        const std::string decay_path = (dir / "decay_fit.txt").string();
        {
            std::ofstream os(decay_path);
            if (res.decay) {
                os.setf(std::ios::scientific);
                os.precision(9);
                os << "decay fit of ln ||f||_{inf,q}\n";
                os << "  k  : " << res.decay->k << "\n";
                os << "  C  : " << res.decay->C << "\n";
                os << "  r2 : " << res.decay->r2 << "\n";
                os << "  samples used: " << res.decay->n_used << "\n";
            } else {
                os << "decay fit unavailable: " << res.decay_error << "\n";
            }
        }
        artifacts.push_back(decay_path);

        if (cfg.emit_svg) {
            const char* log_cols[] = {"linf_q", "rel_entropy", "entropy_split"};
            CsvTable t = read_csv(csv_path);
            for (std::size_t col = 1; col < t.columns.size(); ++col) {
                bgk::SvgSeries s;
                s.label = t.columns[col];
                for (const auto& row : t.rows) {
                    s.x.push_back(row[0]);
                    s.y.push_back(row[col]);
                }
                bgk::SvgOptions opt;
                opt.title = t.columns[col];
                for (const char* lc : log_cols)
                    if (t.columns[col] == lc) opt.log_y = true;
                if (t.columns[col] == "macro_dev") {
                    opt.draw_guide = true;
                    opt.guide_y = 2.0 * cfg.delta;
                }
                const std::string svg_path = (dir / (t.columns[col] + ".svg")).string();
                bgk::write_line_chart(svg_path, {s}, opt);
                artifacts.push_back(svg_path);
            }
        }
        timings.lap("artifacts");

        // run-level invariant summary: conservation drift, H-theorem,
        // entropy-split bound and relative-entropy monotonicity
        const auto& recs = res.records;
        double dm = 0.0, de = 0.0, dp = 0.0, dh = 0.0, dre = 0.0, dsplit = -1e300;
        for (std::size_t i = 0; i < recs.size(); ++i) {
            dm = std::max(dm, std::abs(recs[i].mass - recs[0].mass) / std::abs(recs[0].mass));
            de = std::max(de,
                          std::abs(recs[i].energy - recs[0].energy) / std::abs(recs[0].energy));
            for (int d = 0; d < 3; ++d)
                dp = std::max(dp, std::abs(recs[i].momentum[d] - recs[0].momentum[d]));
            dsplit = std::max(dsplit, recs[i].entropy_split - recs[0].relative_entropy);
            if (i > 0) {
                dh = std::max(dh, recs[i].boltzmann_H - recs[i - 1].boltzmann_H);
                dre = std::max(dre, recs[i].relative_entropy - recs[i - 1].relative_entropy);
            }
        }

        json manifest;
        for (const auto& [k, v] : bgk::config_echo(cfg)) manifest["config"][k] = v;
        manifest["config"]["out_dir"] = cfg.out_dir;
        artifacts.push_back(manifest_path.string());
        manifest["artifacts"] = artifacts;
        for (const auto& [name, sec] : timings.phases) manifest["timings_sec"][name] = sec;
        manifest["passes"]["completed"] = true;
        manifest["passes"]["decay_fit_available"] = bool(res.decay);
        manifest["passes"]["regime_crossed"] = res.regime.crossed;
        manifest["passes"]["conservation"] = dm <= 1e-10 && de <= 1e-10 && dp <= 1e-10;
        manifest["passes"]["h_theorem"] = dh <= 1e-12;
        manifest["passes"]["entropy_split_bound"] = dsplit <= 1e-8;
        manifest["passes"]["relative_entropy_monotone"] = dre <= 1e-12;
        manifest["invariants"]["mass_relative_drift"] = dm;
        manifest["invariants"]["energy_relative_drift"] = de;
        manifest["invariants"]["momentum_absolute_drift"] = dp;
        manifest["invariants"]["max_H_step_increase"] = dh;
        manifest["invariants"]["max_entropy_step_increase"] = dre;
        manifest["invariants"]["entropy_split_excess"] = dsplit;
        manifest["warnings"] = res.warnings;
        manifest["regime"]["t_eq_predicted"] = res.regime.t_eq_predicted;
        manifest["regime"]["t_delta_crossing"] =
            res.regime.crossed ? json(res.regime.t_delta_crossing) : json();
        manifest["regime"]["M0"] = res.regime.M0;
        if (res.decay) {
            manifest["decay"]["k"] = res.decay->k;
            manifest["decay"]["C"] = res.decay->C;
            manifest["decay"]["r2"] = res.decay->r2;
        }
        manifest["clamped_mass_total"] = res.state.clamped_mass_total;
        std::ofstream os(manifest_path);
        os << manifest.dump(2) << "\n";

        std::cout << res.regime.to_text();
        if (res.decay)
            std::cout << "decay fit: k=" << res.decay->k << " r2=" << res.decay->r2 << "\n";
        std::cout << "wrote " << artifacts.size() + 1 << " artifacts to " << cfg.out_dir << "\n";
        return kOk;
    } catch (const std::exception& ex) {
        std::cerr << "run aborted: " << ex.what() << "\n";
        return kRuntimeAbort;
    }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_dir) {
    if (!bgk::known_suite(suite)) {
        std::cerr << "unknown suite '" << suite
                  << "' (expected linearization, hessian, conservation, entropy, regimes, all)\n";
        return kUsageError;
    }
    try {
        const auto results = bgk::run_suites(suite, seed);
        const std::string report = bgk::suites_report(results);
        std::cout << report;
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            std::ofstream os(fs::path(out_dir) / ("verify_" + suite + ".txt"));
            os << report;
        }
        for (const auto& r : results)
            if (!r.pass) return kRuntimeAbort;
        return kOk;
    } catch (const std::exception& ex) {
        std::cerr << "verify aborted: " << ex.what() << "\n";
        return kRuntimeAbort;
    }
}

int cmd_plot(const std::string& csv_path, const std::string& columns, const std::string& out_svg,
             bool log_scale, double guide_y) {
    try {
        CsvTable t = read_csv(csv_path);
        if (t.rows.empty()) {
            std::cerr << "CSV has a header but no data rows: " << csv_path << "\n";
            return kUsageError;
        }
        std::vector<bgk::SvgSeries> series;
        std::stringstream cs(columns);
        std::string name;
        while (std::getline(cs, name, ',')) {
            auto it = std::find(t.columns.begin(), t.columns.end(), name);
            if (it == t.columns.end()) {
                std::cerr << "no column '" << name << "' in " << csv_path << "; available:";
                for (const auto& c : t.columns) std::cerr << " " << c;
                std::cerr << "\n";
                return kUsageError;
            }
            const std::size_t col = static_cast<std::size_t>(it - t.columns.begin());
            bgk::SvgSeries s;
            s.label = name;
            for (const auto& row : t.rows) {
                s.x.push_back(row[0]);
                s.y.push_back(row[col]);
            }
            series.push_back(std::move(s));
        }
        if (series.empty()) {
            std::cerr << "no columns requested\n";
            return kUsageError;
        }
        bgk::SvgOptions opt;
        opt.title = fs::path(csv_path).filename().string();
        opt.log_y = log_scale;
        if (guide_y > 0.0) {
            opt.draw_guide = true;
            opt.guide_y = guide_y;
        } else if (columns.find("macro_dev") != std::string::npos) {
            // delta from the manifest next to the CSV, if present: 2*delta guide
            const fs::path manifest = fs::path(csv_path).parent_path() / "manifest.json";
            std::ifstream ms(manifest);
            if (ms) {
                try {
                    const json m = json::parse(ms);
                    const double delta = std::stod(m.at("config").at("delta").get<std::string>());
                    opt.draw_guide = true;
                    opt.guide_y = 2.0 * delta;
                } catch (...) {
                    // no usable manifest; plot without the guide
                }
            }
        }
        bgk::write_line_chart(out_svg, series, opt);
        std::cout << "wrote " << out_svg << "\n";
        return kOk;
    } catch (const std::exception& ex) {
        std::cerr << "plot failed: " << ex.what() << "\n";
        return kRuntimeAbort;
    }
}

int cmd_snapshot_save(const std::string& config_path, const std::string& out_path) {
    bgk::ConfigParse parsed = bgk::parse_config_file(config_path);
    if (!parsed.ok()) {
        std::cerr << "config error(s):\n";
        for (const auto& e : parsed.errors) std::cerr << "  - " << e << "\n";
        return kUsageError;
    }
    try {
        const bgk::SimConfig& cfg = parsed.config;
        bgk::Domain dom =
            bgk::make_domain(cfg.dims, cfg.cells_per_axis, cfg.nodes_per_axis, cfg.v_max);
        bgk::GridFunction F0 = bgk::scenario_initial_data(cfg, dom);
        bgk::Snapshot snap;
        snap.dims = cfg.dims;
        snap.cells_per_axis = cfg.cells_per_axis;
        snap.nodes_per_axis = cfg.nodes_per_axis;
        snap.v_max = cfg.v_max;
        snap.time = 0.0;
        snap.values = std::move(F0.values);
        bgk::save_snapshot(out_path, snap);
        std::cout << "wrote snapshot " << out_path << "\n";
        return kOk;
    } catch (const std::exception& ex) {
        std::cerr << "snapshot save failed: " << ex.what() << "\n";
        return kRuntimeAbort;
    }
}

int cmd_snapshot_info(const std::string& path) {
    try {
        const bgk::Snapshot snap = bgk::load_snapshot(path);
        std::cout << "snapshot " << path << "\n";
        std::cout << "  dims           : " << snap.dims << "\n";
        std::cout << "  cells_per_axis : " << snap.cells_per_axis << "\n";
        std::cout << "  nodes_per_axis : " << snap.nodes_per_axis << "\n";
        std::cout << "  v_max          : " << snap.v_max << "\n";
        std::cout << "  time           : " << snap.time << "\n";
        std::cout << "  values         : " << snap.values.size() << "\n";
        return kOk;
    } catch (const std::exception& ex) {
        std::cerr << "snapshot info failed: " << ex.what() << "\n";
        return kRuntimeAbort;
    }
}

int cmd_snapshot_copy(const std::string& in_path, const std::string& out_path) {
    try {
        bgk::save_snapshot(out_path, bgk::load_snapshot(in_path));
        std::cout << "copied " << in_path << " -> " << out_path << "\n";
        return kOk;
    } catch (const std::exception& ex) {
        std::cerr << "snapshot copy failed: " << ex.what() << "\n";
        return kRuntimeAbort;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bgk: discrete-velocity BGK solver and property checker"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite = "all", csv_path, columns, out_svg;
    std::string snap_in, snap_out;
    std::uint64_t seed = 0;
    bool resume = false, log_scale = false;
    double guide_y = 0.0;

    auto* run_cmd = app.add_subcommand("run", "run a scenario from a config file");
    run_cmd->add_option("--config", config_path, "config file path")->required();
    run_cmd->add_option("--out", out_dir, "output directory (overrides config)");
    run_cmd->add_flag("--resume", resume, "refuse to overwrite existing artifacts");

    auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
    verify_cmd->add_option("--suite", suite,
                           "linearization, hessian, conservation, entropy, regimes, all");
    verify_cmd->add_option("--seed", seed, "randomization seed");
    verify_cmd->add_option("--out", out_dir, "directory for the report copy");

    auto* plot_cmd = app.add_subcommand("plot", "render CSV columns as an SVG line chart");
    plot_cmd->add_option("--csv", csv_path, "diagnostics CSV path")->required();
    plot_cmd->add_option("--columns", columns, "comma-separated column names")->required();
    plot_cmd->add_option("--out", out_svg, "output SVG path")->required();
    plot_cmd->add_flag("--log-scale", log_scale, "log scale on the y axis");
    plot_cmd->add_option("--guide", guide_y, "horizontal guide line value");

    auto* snap_cmd = app.add_subcommand("snapshot", "save/load binary state snapshots");
    auto* snap_save = snap_cmd->add_subcommand("save", "write a scenario's initial state");
    snap_save->add_option("--config", config_path, "config file path")->required();
    snap_save->add_option("--out", snap_out, "snapshot path")->required();
    auto* snap_info = snap_cmd->add_subcommand("info", "print snapshot header");
    snap_info->add_option("--in", snap_in, "snapshot path")->required();
    auto* snap_copy = snap_cmd->add_subcommand("copy", "load then save (round-trip)");
    snap_copy->add_option("--in", snap_in, "snapshot path")->required();
    snap_copy->add_option("--out", snap_out, "output path")->required();
    snap_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    if (run_cmd->parsed()) return cmd_run(config_path, out_dir, resume);
    if (verify_cmd->parsed()) return cmd_verify(suite, seed, out_dir);
    if (plot_cmd->parsed()) return cmd_plot(csv_path, columns, out_svg, log_scale, guide_y);
    if (snap_cmd->parsed()) {
        if (snap_save->parsed()) return cmd_snapshot_save(config_path, snap_out);
        if (snap_info->parsed()) return cmd_snapshot_info(snap_in);
        if (snap_copy->parsed()) return cmd_snapshot_copy(snap_in, snap_out);
    }
    return kUsageError;
}
