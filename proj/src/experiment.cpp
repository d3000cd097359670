#include "desync/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "desync/charts.hpp"

namespace desync {

namespace {

std::vector<std::string> star_sizes(std::initializer_list<int> sizes) {
    std::vector<std::string> out;
    for (int s : sizes) out.push_back("star:" + std::to_string(s));
    return out;
}

} // namespace

ExperimentSpec preset(const std::string& name) {
    ExperimentSpec spec;
    spec.name = name;
    spec.out_dir = "results/" + name;
    if (name == "single-hop") {
        spec.protocols = {ProtocolKind::MDwarf, ProtocolKind::ExtDesync,
                          ProtocolKind::Lightweight};
        spec.topologies = {"complete:4", "complete:8", "complete:16", "complete:32"};
    } else if (name == "multi-hop") {
        spec.protocols = {ProtocolKind::MDwarf, ProtocolKind::ExtDesync,
                          ProtocolKind::Lightweight};
        spec.topologies = {"star:6",  "star:20",    "chain:3",     "chain:10", "cycle:4",
                           "cycle:10", "dumbbell:6", "dumbbell:20", "mesh10"};
    } else if (name == "period-sweep") {
        spec.protocols = {ProtocolKind::MDwarf, ProtocolKind::ExtDesync};
        spec.topologies = {"star:30"};
        spec.periods_ms = {1000.0, 2000.0, 3000.0};
    } else if (name == "fairness") {
        spec.protocols = {ProtocolKind::MDwarf, ProtocolKind::ExtDesync};
        spec.topologies = star_sizes({30, 40, 50, 60});
        spec.periods_ms = {1000.0, 2000.0, 3000.0};
    } else if (name == "overhead") {
        spec.protocols = {ProtocolKind::MDwarf};
        spec.topologies = {"star:10"};
        spec.betas = {0, 4, 8, 12, 16, 20};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return spec;
}

std::vector<std::string> preset_names() {
    return {"single-hop", "multi-hop", "period-sweep", "fairness", "overhead"};
}

RunMetrics compute_run_metrics(const RunTrace& trace, const Topology& topology,
                               const MetricParams& params) {
    RunMetrics m;
    auto imap = two_hop(topology);
    auto cliques = maximal_cliques(imap);
    const auto& final_phases = trace.phases.back();

    ErrorStats err = clique_rmse(final_phases, trace.period_ms, cliques);
    m.rmse = err.rmse;
    m.nrmse = err.nrmse;

    m.converged_at = converged_at(trace, params);
    auto oracle = min_slots(topology);
    auto slot_report = slots_used(final_phases, trace.period_ms, imap,
                                  params.eps_slot_frac * trace.period_ms, oracle,
                                  m.converged_at.has_value());
    m.slots = slot_report.observed;
    m.shrinkage_pct = slot_report.shrinkage_pct;
    m.slots_valid = slot_report.valid;

    m.fairness_stddev = fairness(trace, imap).run_avg;
    int disp_from = m.converged_at ? *m.converged_at : trace.periods / 2;
    m.mean_displacement_ms = mean_displacement(trace, disp_from);
    return m;
}

ResultsBundle run_experiment(const ExperimentSpec& spec, int threads) {
    if (spec.seeds < 1) throw std::invalid_argument("experiment needs at least one seed");
    if (spec.periods < 1) throw std::invalid_argument("experiment needs at least one period");

    struct Job {
        RunKey key;
        Topology topology;
    };
    std::vector<Job> jobs;
    for (auto protocol : spec.protocols)
        for (const auto& topo : spec.topologies) {
            Topology t = make_topology(topo);
            for (double T : spec.periods_ms)
                for (int beta : spec.betas)
                    for (int k = 0; k < spec.seeds; ++k) {
                        RunKey key{spec.name, protocol, topo, T, beta,
                                   spec.base_seed + static_cast<std::uint64_t>(k)};
                        jobs.push_back({key, t});
                    }
        }

    ResultsBundle bundle;
    bundle.spec = spec;
    bundle.runs.resize(jobs.size());

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(jobs.size())));

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) break;
            const Job& job = jobs[i];
            RunConfig cfg;
            cfg.topology = job.topology;
            cfg.protocol = job.key.protocol;
            cfg.period_ms = job.key.period_ms;
            cfg.periods = spec.periods;
            cfg.seed = job.key.seed;
            cfg.bitrate_bps = spec.bitrate_bps;
            cfg.proto = spec.proto;
            cfg.proto.beta = job.key.beta;
            RunResult result;
            result.key = job.key;
            result.trace = run(cfg);
            result.metrics = compute_run_metrics(result.trace, job.topology, spec.metrics);
            bundle.runs[i] = std::move(result);
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return bundle;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_phase(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string key_prefix(const RunKey& k) {
    std::ostringstream os;
    os << k.experiment << ',' << to_string(k.protocol) << ',' << k.topology << ','
       << fmt(k.period_ms) << ',' << k.beta;
    return os.str();
}

} // namespace

void write_phases_csv(const ResultsBundle& bundle, std::ostream& out) {
    out << "# schema=desyncsim-phases-v1\n";
    out << "experiment,protocol,topology,T,beta,seed,period,node,phase_ms\n";
    for (const auto& run : bundle.runs) {
        std::string prefix = key_prefix(run.key) + ',' + std::to_string(run.key.seed);
        for (int p = 0; p < run.trace.periods; ++p)
            for (int i = 0; i < run.trace.node_count; ++i)
                out << prefix << ',' << p << ',' << i << ','
                    << fmt_phase(run.trace.phases[p][i]) << '\n';
    }
}

void write_metrics_csv(const ResultsBundle& bundle, std::ostream& out) {
    out << "# schema=desyncsim-metrics-v1\n";
    out << "experiment,protocol,topology,T,beta,seed,rmse,nrmse,converged_at,slots,"
           "shrinkage_pct,fairness_stddev\n";
    for (const auto& run : bundle.runs) {
        const auto& m = run.metrics;
        out << key_prefix(run.key) << ',' << run.key.seed << ',' << fmt(m.rmse) << ','
            << fmt(m.nrmse) << ',';
        if (m.converged_at) out << *m.converged_at;
        out << ',' << m.slots << ',' << fmt(m.shrinkage_pct) << ',' << fmt(m.fairness_stddev)
            << '\n';
    }
}

void write_summary_csv(const ResultsBundle& bundle, std::ostream& out) {
    out << "# schema=desyncsim-summary-v1\n";
    out << "experiment,protocol,topology,T,beta,runs,mean_rmse,mean_nrmse,converged_runs,"
           "mean_converged_at,mean_slots,mean_shrinkage_pct,mean_fairness_stddev\n";
    // Group rows in first-appearance order (spec enumeration order).
    std::vector<std::string> order;
    std::map<std::string, std::vector<const RunResult*>> groups;
    for (const auto& run : bundle.runs) {
        std::string key = key_prefix(run.key);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&run);
    }
    for (const auto& key : order) {
        const auto& runs = groups[key];
        double rmse = 0, nrmse = 0, slots = 0, shrink = 0, fair = 0, conv_sum = 0;
        int conv_count = 0;
        for (const auto* r : runs) {
            rmse += r->metrics.rmse;
            nrmse += r->metrics.nrmse;
            slots += r->metrics.slots;
            shrink += r->metrics.shrinkage_pct;
            fair += r->metrics.fairness_stddev;
            if (r->metrics.converged_at) {
                conv_sum += *r->metrics.converged_at;
                ++conv_count;
            }
        }
        double n = static_cast<double>(runs.size());
        out << key << ',' << runs.size() << ',' << fmt(rmse / n) << ',' << fmt(nrmse / n) << ','
            << conv_count << ',';
        if (conv_count > 0) out << fmt(conv_sum / conv_count);
        out << ',' << fmt(slots / n) << ',' << fmt(shrink / n) << ',' << fmt(fair / n) << '\n';
    }
}

std::vector<std::string> write_bundle(const ResultsBundle& bundle, bool charts) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    fs::path dir(bundle.spec.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());

    auto write_file = [&](const std::string& name, auto writer) {
        fs::path path = dir / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        writer(out);
        written.push_back(path.string());
    };
    write_file("phases.csv", [&](std::ostream& o) { write_phases_csv(bundle, o); });
    write_file("metrics.csv", [&](std::ostream& o) { write_metrics_csv(bundle, o); });
    write_file("summary.csv", [&](std::ostream& o) { write_summary_csv(bundle, o); });

    if (charts) {
        try {
            auto chart_files = render_charts(bundle, (dir / "charts").string());
            written.insert(written.end(), chart_files.begin(), chart_files.end());
        } catch (const std::exception& e) {
            std::cerr << "warning: chart rendering failed (" << e.what()
                      << "); results are CSV-only\n";
        }
    }
    return written;
}

ResultsBundle read_phases_csv(std::istream& in, const ExperimentSpec& spec_defaults) {
    ResultsBundle bundle;
    bundle.spec = spec_defaults;

    struct Partial {
        RunKey key;
        std::vector<std::vector<double>> rows; // [period][node]
    };
    std::vector<Partial> partials;
    std::map<std::string, std::size_t> index;

    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // column header row
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ',')) cols.push_back(col);
        if (cols.size() != 9) throw std::runtime_error("phases.csv: malformed row: " + line);

        RunKey key;
        key.experiment = cols[0];
        key.protocol = parse_protocol(cols[1]);
        key.topology = cols[2];
        key.period_ms = std::stod(cols[3]);
        key.beta = std::stoi(cols[4]);
        key.seed = std::stoull(cols[5]);
        int period = std::stoi(cols[6]);
        int node = std::stoi(cols[7]);
        double phase = std::stod(cols[8]);

        std::string id = key_prefix(key) + ',' + cols[5];
        auto [it, inserted] = index.try_emplace(id, partials.size());
        if (inserted) partials.push_back({key, {}});
        auto& rows = partials[it->second].rows;
        if (period >= static_cast<int>(rows.size())) rows.resize(period + 1);
        if (node >= static_cast<int>(rows[period].size())) rows[period].resize(node + 1);
        rows[period][node] = phase;
    }

    for (auto& partial : partials) {
        RunResult result;
        result.key = partial.key;
        result.trace.period_ms = partial.key.period_ms;
        result.trace.periods = static_cast<int>(partial.rows.size());
        result.trace.node_count =
            partial.rows.empty() ? 0 : static_cast<int>(partial.rows.front().size());
        result.trace.phases = std::move(partial.rows);
        result.trace.initial_phases = result.trace.phases.front();
        result.trace.collisions.assign(result.trace.periods, 0);
        result.trace.node_collisions.assign(result.trace.periods,
                                            std::vector<int>(result.trace.node_count, 0));
        result.trace.fires.assign(result.trace.node_count, 0);
        result.trace.receives.assign(result.trace.node_count, 0);
        Topology t = make_topology(partial.key.topology);
        result.metrics = compute_run_metrics(result.trace, t, spec_defaults.metrics);
        bundle.runs.push_back(std::move(result));
    }
    return bundle;
}

} // namespace desync
