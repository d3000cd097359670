#pragma once

#include <string>
#include <vector>

#include "desync/experiment.hpp"

namespace desync {

// Relative-phase chart for one run: each node's phase relative to node 0,
// per period, one polyline per node.
void render_relative_phase_chart(const RunResult& run, const std::string& path);

// Mean final NRMSE per (protocol, topology) as grouped bars.
void render_error_chart(const ResultsBundle& bundle, const std::string& path);

// Render every chart for a bundle into `dir`; returns the files written.
std::vector<std::string> render_charts(const ResultsBundle& bundle, const std::string& dir);

} // namespace desync
