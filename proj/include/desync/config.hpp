#pragma once

#include <map>
#include <string>

#include "desync/experiment.hpp"

namespace desync {

// Flat key/value config text with [section] headers; keys are reported as
// "section.key" ("run" is the implicit leading section). '#' and ';' start
// comments.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// Keys understood under [run]: name, protocols, topologies, T, periods,
// seeds, base_seed, beta, out; protocol sections use the option names
// mdwarf.c1, mdwarf.c2, mdwarf.eps_abs_frac, mdwarf.eps_min_frac,
// extdesync.alpha, lightweight.guard_ms; [metrics] holds delta_stab_frac,
// window, eps_slot_frac.
ExperimentSpec spec_from_config(const std::map<std::string, std::string>& kv);

ExperimentSpec load_spec_file(const std::string& path);

// Apply one "section.key=value" override onto a spec (CLI flags).
void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value);

} // namespace desync
