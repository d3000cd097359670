#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "desync/config.hpp"
#include "desync/experiment.hpp"
#include "desync/topology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

// Relative output directories land under $DESYNCSIM_OUT_ROOT when set.
std::string resolve_out_dir(const std::string& dir) {
    const char* root = std::getenv("DESYNCSIM_OUT_ROOT");
    if (!root || dir.empty() || std::filesystem::path(dir).is_absolute()) return dir;
    return (std::filesystem::path(root) / dir).string();
}

struct FlagOverride {
    std::string key;
    std::string value;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desyncsim: desynchronization protocol simulator and experiment harness"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "execute an experiment spec or preset");
    std::string spec_file, preset_name, out_dir;
    int threads = 0;
    bool no_charts = false;
    std::vector<std::string> overrides;
    run_cmd->add_option("--spec", spec_file, "experiment spec file (key = value with sections)");
    run_cmd->add_option("--preset", preset_name, "preset name (see `preset --list`)");
    run_cmd->add_option("--out", out_dir, "output directory (overrides spec)");
    run_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    run_cmd->add_flag("--no-charts", no_charts, "skip chart rendering");
    run_cmd->add_option("--set", overrides,
                        "override a config key, e.g. --set run.seeds=5 --set mdwarf.c1=4e-4")
        ->take_all();

    // --- preset ------------------------------------------------------------
    auto* preset_cmd = app.add_subcommand("preset", "inspect experiment presets");
    bool list_presets = false;
    std::string show_preset;
    preset_cmd->add_flag("--list", list_presets, "list preset names");
    preset_cmd->add_option("name", show_preset, "print the populated spec for one preset");

    // --- report ------------------------------------------------------------
    auto* report_cmd =
        app.add_subcommand("report", "recompute metrics and charts from a phases.csv");
    std::string phases_path, report_out;
    bool report_no_charts = false;
    report_cmd->add_option("--phases", phases_path, "phases.csv produced by `run`")->required();
    report_cmd->add_option("--out", report_out, "output directory")->required();
    report_cmd->add_flag("--no-charts", report_no_charts, "skip chart rendering");

    // --- oracle ------------------------------------------------------------
    auto* oracle_cmd = app.add_subcommand("oracle", "print the minimum slot count for a topology");
    std::string oracle_topology;
    oracle_cmd->add_option("--topology", oracle_topology, "topology spec, e.g. star:6 or file:PATH")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            desync::ExperimentSpec spec;
            if (!spec_file.empty() && !preset_name.empty()) {
                std::cerr << "error: --spec and --preset are mutually exclusive\n";
                return kExitConfig;
            }
            if (!spec_file.empty()) spec = desync::load_spec_file(spec_file);
            else if (!preset_name.empty()) spec = desync::preset(preset_name);
            else {
                std::cerr << "error: `run` needs --spec or --preset\n";
                return kExitConfig;
            }
            for (const auto& kv : overrides) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "error: --set expects key=value, got: " << kv << "\n";
                    return kExitConfig;
                }
                desync::apply_override(spec, kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (!out_dir.empty()) spec.out_dir = out_dir;
            spec.out_dir = resolve_out_dir(spec.out_dir);

            auto bundle = desync::run_experiment(spec, threads);
            auto files = desync::write_bundle(bundle, !no_charts);
            std::cout << bundle.runs.size() << " runs -> " << spec.out_dir << " ("
                      << files.size() << " files)\n";
            return kExitOk;
        }

        if (preset_cmd->parsed()) {
            if (list_presets || show_preset.empty()) {
                for (const auto& name : desync::preset_names()) std::cout << name << "\n";
                return kExitOk;
            }
            auto spec = desync::preset(show_preset);
            std::cout << "[run]\nname = " << spec.name << "\nprotocols = ";
            for (std::size_t i = 0; i < spec.protocols.size(); ++i)
                std::cout << (i ? ", " : "") << desync::to_string(spec.protocols[i]);
            std::cout << "\ntopologies = ";
            for (std::size_t i = 0; i < spec.topologies.size(); ++i)
                std::cout << (i ? ", " : "") << spec.topologies[i];
            std::cout << "\nT = ";
            for (std::size_t i = 0; i < spec.periods_ms.size(); ++i)
                std::cout << (i ? ", " : "") << spec.periods_ms[i];
            std::cout << "\nbeta = ";
            for (std::size_t i = 0; i < spec.betas.size(); ++i)
                std::cout << (i ? ", " : "") << spec.betas[i];
            std::cout << "\nperiods = " << spec.periods << "\nseeds = " << spec.seeds
                      << "\nbase_seed = " << spec.base_seed << "\nout = " << spec.out_dir << "\n";
            return kExitOk;
        }

        if (report_cmd->parsed()) {
            std::ifstream in(phases_path);
            if (!in) {
                std::cerr << "error: cannot open " << phases_path << "\n";
                return kExitIo;
            }
            desync::ExperimentSpec defaults;
            defaults.out_dir = resolve_out_dir(report_out);
            auto bundle = desync::read_phases_csv(in, defaults);
            if (!bundle.runs.empty()) bundle.spec.name = bundle.runs.front().key.experiment;
            bundle.spec.out_dir = defaults.out_dir;
            auto files = desync::write_bundle(bundle, !report_no_charts);
            std::cout << bundle.runs.size() << " runs recomputed -> " << bundle.spec.out_dir
                      << " (" << files.size() << " files)\n";
            return kExitOk;
        }

        if (oracle_cmd->parsed()) {
            auto topo = desync::make_topology(oracle_topology);
            auto result = desync::min_slots(topo);
            std::cout << "topology " << oracle_topology << ": " << topo.node_count << " nodes, "
                      << topo.edges.size() << " edges\n"
                      << "min_slots = " << result.slots
                      << (result.exact ? " (exact)" : " (greedy bound, not exact)") << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}
