#include "bgk/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bgk {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool to_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool to_int(const std::string& s, int& out) {
    try {
        std::size_t pos = 0;
        out = std::stoi(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool to_bool(const std::string& s, bool& out) {
    if (s == "true" || s == "1" || s == "yes") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        out = false;
        return true;
    }
    return false;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ConfigParse parse_config_text(const std::string& text) {
    ConfigParse out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            out.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) {
            out.errors.push_back("line " + std::to_string(lineno) + ": empty key or value");
            continue;
        }
        if (out.raw.count(key)) out.errors.push_back("duplicate key '" + key + "'");
        out.raw[key] = val;
    }

    SimConfig& c = out.config;
    auto need_double = [&](const char* key, double& slot) {
        auto it = out.raw.find(key);
        if (it == out.raw.end()) {
            out.errors.push_back(std::string("missing required key '") + key + "'");
            return;
        }
        if (!to_double(it->second, slot))
            out.errors.push_back(std::string("key '") + key + "' is not a number: " + it->second);
    };
    auto opt_double = [&](const char* key, double& slot) {
        auto it = out.raw.find(key);
        if (it != out.raw.end() && !to_double(it->second, slot))
            out.errors.push_back(std::string("key '") + key + "' is not a number: " + it->second);
    };
    auto opt_int = [&](const char* key, int& slot) {
        auto it = out.raw.find(key);
        if (it != out.raw.end() && !to_int(it->second, slot))
            out.errors.push_back(std::string("key '") + key + "' is not an integer: " + it->second);
    };
    auto opt_bool = [&](const char* key, bool& slot) {
        auto it = out.raw.find(key);
        if (it != out.raw.end() && !to_bool(it->second, slot))
            out.errors.push_back(std::string("key '") + key + "' is not a boolean: " + it->second);
    };

    // required physical parameters: no silent defaults
    need_double("a", c.a);
    need_double("b", c.b);
    need_double("q", c.q);
    need_double("delta", c.delta);
    need_double("dt", c.dt);
    need_double("t_final", c.t_final);
    if (auto it = out.raw.find("scenario"); it != out.raw.end()) {
        try {
            c.scenario = scenario_from_string(it->second);
        } catch (const std::exception& ex) {
            out.errors.push_back(ex.what());
        }
    } else {
        out.errors.push_back("missing required key 'scenario'");
    }

    // numerical knobs with defaults
    opt_int("dims", c.dims);
    opt_int("cells_per_axis", c.cells_per_axis);
    opt_int("nodes_per_axis", c.nodes_per_axis);
    opt_double("v_max", c.v_max);
    opt_int("n_theta", c.n_theta);
    opt_int("record_every", c.record_every);
    opt_bool("normalize", c.normalize);
    opt_bool("emit_svg", c.emit_svg);
    opt_double("fit_t_start", c.fit_t_start);
    if (auto it = out.raw.find("snapshot_in"); it != out.raw.end()) c.snapshot_in = it->second;
    if (auto it = out.raw.find("snapshot_out"); it != out.raw.end()) c.snapshot_out = it->second;
    if (auto it = out.raw.find("out_dir"); it != out.raw.end()) c.out_dir = it->second;

    static const char* known[] = {"a",         "b",           "q",           "delta",
                                  "dt",        "t_final",     "scenario",    "dims",
                                  "cells_per_axis", "nodes_per_axis", "v_max",  "n_theta",
                                  "record_every", "normalize", "emit_svg",    "fit_t_start",
                                  "snapshot_in", "snapshot_out", "out_dir"};
    for (const auto& [key, val] : out.raw) {
        bool recognized = false;
        for (const char* k : known) recognized = recognized || key == k;
        if (!recognized) out.errors.push_back("unknown key '" + key + "'");
    }

    if (out.errors.empty())
        for (const auto& e : c.validate()) out.errors.push_back(e);
    return out;
}

ConfigParse parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        ConfigParse out;
        out.errors.push_back("cannot open config file " + path);
        return out;
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_echo(const SimConfig& c) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("scenario", scenario_name(c.scenario));
    kv.emplace_back("dims", std::to_string(c.dims));
    kv.emplace_back("cells_per_axis", std::to_string(c.cells_per_axis));
    kv.emplace_back("nodes_per_axis", std::to_string(c.nodes_per_axis));
    kv.emplace_back("v_max", fmt(c.v_max));
    kv.emplace_back("a", fmt(c.a));
    kv.emplace_back("b", fmt(c.b));
    kv.emplace_back("q", fmt(c.q));
    kv.emplace_back("delta", fmt(c.delta));
    kv.emplace_back("dt", fmt(c.dt));
    kv.emplace_back("t_final", fmt(c.t_final));
    kv.emplace_back("n_theta", std::to_string(c.n_theta));
    kv.emplace_back("record_every", std::to_string(c.record_every));
    kv.emplace_back("normalize", c.normalize ? "true" : "false");
    kv.emplace_back("emit_svg", c.emit_svg ? "true" : "false");
    kv.emplace_back("fit_t_start", fmt(c.fit_t_start));
    if (!c.snapshot_in.empty()) kv.emplace_back("snapshot_in", c.snapshot_in);
    if (!c.snapshot_out.empty()) kv.emplace_back("snapshot_out", c.snapshot_out);
    return kv;
}

}  // namespace bgk
