#pragma once

#include <string>
#include <string_view>

#include "gkclim/parameters.hpp"
#include "gkclim/toml.hpp"

namespace gkclim {

/// Reads an experiment file on top of the defaults. Unknown keys are errors.
ExperimentConfig load_config(const std::string& path);
void apply_table(ExperimentConfig& cfg, const toml::Table& table);

/// Applies a `name=value` override. `name` is a top-level key, a parameter
/// (field name or symbol) or `<table>.<key>` for any config table; `value`
/// uses TOML syntax, bare words are taken as strings.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// Serialises the full effective configuration; `load_config` on the output
/// reproduces `cfg` exactly.
std::string to_toml(const ExperimentConfig& cfg);

/// Effective parameter values and initial conditions as a JSON document.
std::string params_json(const ExperimentConfig& cfg, int indent = 2);

/// Throws ConfigError listing every violation, if any.
void require_valid(const ExperimentConfig& cfg);

}  // namespace gkclim
