#include "desync/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "desync/phase_math.hpp"

namespace desync {

ErrorStats rmse(std::span<const double> phases, double period_ms) {
    const int n = static_cast<int>(phases.size());
    if (n < 2) throw std::invalid_argument("rmse needs at least 2 phases");
    std::vector<double> sorted(phases.begin(), phases.end());
    std::sort(sorted.begin(), sorted.end());
    const double perfect = period_ms / n;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double next = i + 1 < n ? sorted[i + 1] : sorted[0] + period_ms;
        double gap = next - sorted[i];
        double err = gap - perfect;
        sum_sq += err * err;
    }
    ErrorStats stats;
    stats.rmse = std::sqrt(sum_sq / n);
    stats.nrmse = stats.rmse / perfect;
    return stats;
}

std::vector<std::vector<double>> per_period_displacement(const RunTrace& trace) {
    std::vector<std::vector<double>> disp(trace.periods, std::vector<double>(trace.node_count));
    for (int p = 0; p < trace.periods; ++p) {
        const auto& prev = p == 0 ? trace.initial_phases : trace.phases[p - 1];
        for (int i = 0; i < trace.node_count; ++i)
            disp[p][i] = circ_dist(trace.phases[p][i], prev[i], trace.period_ms);
    }
    return disp;
}

std::optional<int> converged_at(const RunTrace& trace, double delta_stab_ms, int window) {
    if (trace.periods == 0) return std::nullopt;
    auto disp = per_period_displacement(trace);
    std::vector<bool> stable(trace.periods);
    for (int p = 0; p < trace.periods; ++p) {
        bool ok = true;
        for (double d : disp[p])
            if (d >= delta_stab_ms) {
                ok = false;
                break;
            }
        stable[p] = ok;
    }
    int run = 0;
    for (int p = 0; p < trace.periods; ++p) {
        run = stable[p] ? run + 1 : 0;
        if (run >= window) return p - window + 1;
    }
    return std::nullopt;
}

std::optional<int> converged_at(const RunTrace& trace, const MetricParams& params) {
    return converged_at(trace, params.delta_stab_frac * trace.period_ms, params.window);
}

double mean_displacement(const RunTrace& trace, int from_period) {
    auto disp = per_period_displacement(trace);
    double sum = 0.0;
    long count = 0;
    for (int p = std::max(0, from_period); p < trace.periods; ++p)
        for (double d : disp[p]) {
            sum += d;
            ++count;
        }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double shrinkage_pct(int optimal_slots, int observed_slots) {
    if (observed_slots <= 0) throw std::invalid_argument("observed slot count must be positive");
    return (static_cast<double>(observed_slots) - optimal_slots) /
           static_cast<double>(observed_slots) * 100.0;
}

namespace {

// Single-link clustering of phases on the circle: indices grouped so that
// consecutive sorted phases within eps belong to one cluster, with the
// wrap-around gap treated like any other.
std::vector<std::vector<int>> phase_clusters(std::span<const double> phases, double period_ms,
                                             double eps_ms) {
    const int n = static_cast<int>(phases.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return phases[a] != phases[b] ? phases[a] < phases[b] : a < b;
    });

    std::vector<std::vector<int>> clusters;
    for (int k = 0; k < n; ++k) {
        if (k == 0) {
            clusters.push_back({order[k]});
            continue;
        }
        double gap = phases[order[k]] - phases[order[k - 1]];
        if (gap <= eps_ms) clusters.back().push_back(order[k]);
        else clusters.push_back({order[k]});
    }
    // Merge across the wrap if the circular gap between last and first closes.
    if (clusters.size() > 1) {
        double wrap_gap = phases[order[0]] + period_ms - phases[order[n - 1]];
        if (wrap_gap <= eps_ms) {
            auto tail = clusters.back();
            clusters.pop_back();
            clusters.front().insert(clusters.front().begin(), tail.begin(), tail.end());
        }
    }
    return clusters;
}

} // namespace

SlotReport slots_used(std::span<const double> phases, double period_ms,
                      const InterferenceMap& imap, double eps_slot_ms, SlotsResult oracle,
                      bool converged) {
    SlotReport report;
    report.optimal = oracle.slots;
    report.optimal_exact = oracle.exact;
    report.reliable = converged;

    auto clusters = phase_clusters(phases, period_ms, eps_slot_ms);
    report.observed = static_cast<int>(clusters.size());
    report.shrinkage_pct = shrinkage_pct(oracle.slots, report.observed);

    report.valid = true;
    for (const auto& cluster : clusters) {
        for (std::size_t a = 0; a < cluster.size() && report.valid; ++a)
            for (std::size_t b = a + 1; b < cluster.size(); ++b) {
                int u = cluster[a], v = cluster[b];
                if (std::binary_search(imap[u].begin(), imap[u].end(), v)) {
                    report.valid = false;
                    break;
                }
            }
        if (!report.valid) break;
    }
    return report;
}

std::vector<double> utilization(std::span<const double> phases, double period_ms,
                                const InterferenceMap& imap) {
    const int n = static_cast<int>(phases.size());
    std::vector<double> util(n, 1.0);
    for (int i = 0; i < n; ++i) {
        if (imap[i].empty()) continue;
        double best = period_ms;
        for (int j : imap[i]) {
            double fwd = mod_pos(phases[j] - phases[i], period_ms);
            if (fwd == 0.0) fwd = period_ms; // coincident: full circle away
            best = std::min(best, fwd);
        }
        util[i] = best / period_ms;
    }
    return util;
}

FairnessReport fairness(const RunTrace& trace, const InterferenceMap& imap) {
    FairnessReport report;
    report.stddev_per_period.reserve(trace.periods);
    for (int p = 0; p < trace.periods; ++p) {
        auto util = utilization(trace.phases[p], trace.period_ms, imap);
        double mean = 0.0;
        for (double u : util) mean += u;
        mean /= static_cast<double>(util.size());
        double var = 0.0;
        for (double u : util) var += (u - mean) * (u - mean);
        var /= static_cast<double>(util.size());
        report.stddev_per_period.push_back(std::sqrt(var));
    }
    int from = trace.periods / 2;
    double sum = 0.0;
    int count = 0;
    for (int p = from; p < trace.periods; ++p) {
        sum += report.stddev_per_period[p];
        ++count;
    }
    report.run_avg = count == 0 ? 0.0 : sum / count;
    return report;
}

namespace {

void bron_kerbosch(const std::vector<std::vector<int>>& adj, std::vector<int>& R,
                   std::vector<int> P, std::vector<int> X,
                   std::vector<std::vector<int>>& out) {
    if (P.empty() && X.empty()) {
        out.push_back(R);
        return;
    }
    auto is_adj = [&](int u, int v) {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    };
    // Pivot on the P∪X vertex covering the most of P.
    int pivot = -1, best = -1;
    for (const auto* set : {&P, &X})
        for (int u : *set) {
            int c = 0;
            for (int v : P)
                if (is_adj(u, v)) ++c;
            if (c > best) {
                best = c;
                pivot = u;
            }
        }
    std::vector<int> candidates;
    for (int v : P)
        if (pivot < 0 || !is_adj(pivot, v)) candidates.push_back(v);
    for (int v : candidates) {
        std::vector<int> P2, X2;
        for (int u : P)
            if (is_adj(v, u)) P2.push_back(u);
        for (int u : X)
            if (is_adj(v, u)) X2.push_back(u);
        R.push_back(v);
        bron_kerbosch(adj, R, std::move(P2), std::move(X2), out);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.push_back(v);
    }
}

} // namespace

std::vector<std::vector<int>> maximal_cliques(const InterferenceMap& imap) {
    std::vector<int> all(imap.size());
    for (std::size_t i = 0; i < imap.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<std::vector<int>> out;
    std::vector<int> R;
    bron_kerbosch(imap, R, all, {}, out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

ErrorStats clique_rmse(std::span<const double> phases, double period_ms,
                       const std::vector<std::vector<int>>& cliques) {
    ErrorStats acc;
    int used = 0;
    std::vector<double> member;
    for (const auto& clique : cliques) {
        if (clique.size() < 2) continue;
        member.clear();
        for (int i : clique) member.push_back(phases[i]);
        ErrorStats s = rmse(member, period_ms);
        acc.rmse += s.rmse;
        acc.nrmse += s.nrmse;
        ++used;
    }
    if (used == 0) throw std::invalid_argument("no clique with at least 2 nodes");
    acc.rmse /= used;
    acc.nrmse /= used;
    return acc;
}

Classification classify(const RunTrace& trace, const InterferenceMap& imap,
                        const MetricParams& params) {
    Classification cls;
    auto conv = converged_at(trace, params);
    if (!conv) {
        cls.convergence = ConvergenceClass::Slow;
        cls.stability = StabilityClass::Low;
    } else {
        int at = *conv;
        cls.convergence = at <= params.fast_periods     ? ConvergenceClass::Fast
                          : at <= params.medium_periods ? ConvergenceClass::Medium
                                                        : ConvergenceClass::Slow;
        double disp = mean_displacement(trace, at);
        cls.stability = disp < params.stab_high_ms     ? StabilityClass::High
                        : disp < params.stab_medium_ms ? StabilityClass::Medium
                                                       : StabilityClass::Low;
    }
    // Fairness: steady-state gap dispersion over interference cliques.
    auto cliques = maximal_cliques(imap);
    double nrmse_sum = 0.0;
    int count = 0;
    for (int p = trace.periods / 2; p < trace.periods; ++p) {
        nrmse_sum += clique_rmse(trace.phases[p], trace.period_ms, cliques).nrmse;
        ++count;
    }
    cls.fair = count > 0 && nrmse_sum / count < params.fairness_nrmse;
    return cls;
}

const char* to_string(ConvergenceClass c) {
    switch (c) {
    case ConvergenceClass::Fast: return "Fast";
    case ConvergenceClass::Medium: return "Medium";
    case ConvergenceClass::Slow: return "Slow";
    }
    return "?";
}

const char* to_string(StabilityClass s) {
    switch (s) {
    case StabilityClass::High: return "High";
    case StabilityClass::Medium: return "Medium";
    case StabilityClass::Low: return "Low";
    }
    return "?";
}

} // namespace desync
