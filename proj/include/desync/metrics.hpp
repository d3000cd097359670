#pragma once

#include <optional>
#include <span>
#include <vector>

#include "desync/sim.hpp"
#include "desync/topology.hpp"

namespace desync {

struct ErrorStats {
    double rmse = 0.0;  // ms
    double nrmse = 0.0; // rmse / (T/n)
};

// Deviation of consecutive circular firing gaps from the perfect gap T/n.
// Requires at least 2 phases.
ErrorStats rmse(std::span<const double> phases, double period_ms);

// Metric knobs and Table-style classification thresholds.
struct MetricParams {
    double delta_stab_frac = 0.005; // convergence displacement bound, fraction of T
    int window = 10;                // consecutive stable periods required
    double eps_slot_frac = 0.02;    // slot clustering radius, fraction of T
    int fast_periods = 50;          // convergence: Fast <= this
    int medium_periods = 150;       // convergence: Medium <= this
    double stab_high_ms = 1.0;      // stability: High < this mean displacement
    double stab_medium_ms = 5.0;    // stability: Medium < this
    double fairness_nrmse = 0.25;   // fairness: Yes iff clique NRMSE below this
};

// Per-period circular displacement of each node, displacement[p][i] =
// distance between the node's phase at the end of periods p-1 and p.
std::vector<std::vector<double>> per_period_displacement(const RunTrace& trace);

// First period from which every node's displacement stays below delta_stab
// for `window` consecutive periods; nullopt when that never happens.
std::optional<int> converged_at(const RunTrace& trace, double delta_stab_ms, int window);
std::optional<int> converged_at(const RunTrace& trace, const MetricParams& params);

// Mean over nodes and periods of the displacement from `from_period` on.
double mean_displacement(const RunTrace& trace, int from_period);

struct SlotReport {
    int observed = 0;          // s_d: phase clusters at the evaluated period
    int optimal = 0;           // s_o: coloring oracle
    bool optimal_exact = true; // false when the oracle fell back to greedy
    double shrinkage_pct = 0.0;
    bool valid = false;    // no cluster holds two mutually interfering nodes
    bool reliable = false; // false when the input was not converged
};

double shrinkage_pct(int optimal_slots, int observed_slots);

SlotReport slots_used(std::span<const double> phases, double period_ms,
                      const InterferenceMap& imap, double eps_slot_ms, SlotsResult oracle,
                      bool converged);

struct FairnessReport {
    std::vector<double> stddev_per_period; // population stddev of utilizations
    double run_avg = 0.0;                  // mean over the final half of periods
};

// Channel utilization of node i in one period: the forward gap from its
// phase to the nearest following phase among its interference set, over T.
// Nodes with an empty interference set count as utilization 1.
std::vector<double> utilization(std::span<const double> phases, double period_ms,
                                const InterferenceMap& imap);

FairnessReport fairness(const RunTrace& trace, const InterferenceMap& imap);

// Maximal cliques of the interference graph (Bron-Kerbosch), each sorted,
// in deterministic order.
std::vector<std::vector<int>> maximal_cliques(const InterferenceMap& imap);

// Error stats averaged over maximal cliques of the interference graph; on a
// single-hop (complete) interference graph this is exactly rmse().
ErrorStats clique_rmse(std::span<const double> phases, double period_ms,
                       const std::vector<std::vector<int>>& cliques);

enum class ConvergenceClass { Fast, Medium, Slow };
enum class StabilityClass { High, Medium, Low };

struct Classification {
    ConvergenceClass convergence = ConvergenceClass::Slow;
    StabilityClass stability = StabilityClass::Low;
    bool fair = false;
};

Classification classify(const RunTrace& trace, const InterferenceMap& imap,
                        const MetricParams& params);

const char* to_string(ConvergenceClass c);
const char* to_string(StabilityClass s);

} // namespace desync
