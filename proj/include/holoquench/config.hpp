#pragma once

#include "holoquench/pipelines.hpp"

#include <string>

// Line-oriented "key = value" config files; '#' starts a comment. Unknown keys,
// repeated keys and malformed values are ConfigErrors carrying line and key.
//
// Required: geometry, task; mu unless task = probe_map (defaults to 1 there).
// Lists (alphas, mus, probe_regions) are comma separated.

namespace holo {

ExperimentConfig parse_config(const std::string &path);
ExperimentConfig parse_config_string(const std::string &text);

/// Every key, defaults included, in a form parse_config_string accepts.
std::string config_echo(const ExperimentConfig &config);

} // namespace holo
