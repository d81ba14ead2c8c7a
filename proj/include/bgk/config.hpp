/// @file config.hpp
/// @brief key = value config files for the CLI.
///
/// Physical parameters (a, b, q, delta) plus scenario, dt and t_final carry
/// no defaults and must be stated; purely numerical knobs (grids, n_theta,
/// record_every, ...) have defaults that are echoed into the run manifest.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "bgk/solver.hpp"

namespace bgk {

struct ConfigParse {
    SimConfig config;
    std::vector<std::string> errors;  // empty iff usable
    std::map<std::string, std::string> raw;

    bool ok() const { return errors.empty(); }
};

ConfigParse parse_config_file(const std::string& path);
ConfigParse parse_config_text(const std::string& text);

/// Fully resolved config as ordered key/value pairs (manifest echo).
std::vector<std::pair<std::string, std::string>> config_echo(const SimConfig& c);

}  // namespace bgk
