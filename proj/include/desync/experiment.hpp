#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "desync/metrics.hpp"
#include "desync/protocol.hpp"
#include "desync/sim.hpp"

namespace desync {

// A batch of runs over the cross product protocol x topology x T x beta x seed.
struct ExperimentSpec {
    std::string name = "experiment";
    std::vector<ProtocolKind> protocols{ProtocolKind::MDwarf};
    std::vector<std::string> topologies{"star:6"}; // make_topology() spec strings
    std::vector<double> periods_ms{1000.0};        // T values
    int periods = 300;
    int seeds = 30;
    std::uint64_t base_seed = 42; // run k uses base_seed + k
    std::vector<int> betas{0};
    std::string out_dir = "results";
    ProtocolConfig proto;
    MetricParams metrics;
    double bitrate_bps = 250000.0;
};

// Experiment presets mirroring the shipped evaluation suites.
ExperimentSpec preset(const std::string& name);
std::vector<std::string> preset_names();

struct RunKey {
    std::string experiment;
    ProtocolKind protocol = ProtocolKind::MDwarf;
    std::string topology;
    double period_ms = 0.0;
    int beta = 0;
    std::uint64_t seed = 0;
};

struct RunMetrics {
    double rmse = 0.0;  // final period, averaged over interference cliques
    double nrmse = 0.0;
    std::optional<int> converged_at;
    int slots = 0;
    double shrinkage_pct = 0.0;
    bool slots_valid = false;
    double fairness_stddev = 0.0;        // run-averaged over the final half
    double mean_displacement_ms = 0.0;   // post-convergence (or final half when never)
};

struct RunResult {
    RunKey key;
    RunTrace trace;
    RunMetrics metrics;
};

struct ResultsBundle {
    ExperimentSpec spec;
    std::vector<RunResult> runs; // deterministic spec-enumeration order
};

// Execute every run of the spec. Runs are independent and fan out over a
// worker pool (threads = 0 picks the hardware count); assembly order is the
// spec enumeration order regardless of scheduling.
ResultsBundle run_experiment(const ExperimentSpec& spec, int threads = 0);

// CSV writers. Every file starts with a schema-version comment line.
void write_phases_csv(const ResultsBundle& bundle, std::ostream& out);
void write_metrics_csv(const ResultsBundle& bundle, std::ostream& out);
void write_summary_csv(const ResultsBundle& bundle, std::ostream& out);

// Write phases/metrics/summary CSVs (and charts unless disabled) under
// spec.out_dir. Returns the list of files written.
std::vector<std::string> write_bundle(const ResultsBundle& bundle, bool charts = true);

// Rebuild a bundle (traces + recomputed metrics) from a phases.csv stream.
// Initial phases are not part of the file; displacement at period 0 is
// unknown and treated as zero.
ResultsBundle read_phases_csv(std::istream& in, const ExperimentSpec& spec_defaults);

RunMetrics compute_run_metrics(const RunTrace& trace, const Topology& topology,
                               const MetricParams& params);

} // namespace desync
