#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "desync/charts.hpp"
#include "desync/config.hpp"
#include "desync/experiment.hpp"

using namespace desync;

namespace {

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.name = "tiny";
    spec.protocols = {ProtocolKind::MDwarf, ProtocolKind::Lightweight};
    spec.topologies = {"star:4"};
    spec.periods = 40;
    spec.seeds = 3;
    spec.out_dir = (std::filesystem::temp_directory_path() / "desync-tiny").string();
    return spec;
}

} // namespace

TEST_CASE("presets are fully populated") {
    for (const auto& name : preset_names()) {
        auto spec = preset(name);
        CHECK(spec.name == name);
        CHECK(spec.periods == 300);
        CHECK(spec.seeds == 30);
        CHECK(!spec.protocols.empty());
        CHECK(!spec.topologies.empty());
        for (const auto& t : spec.topologies) CHECK(make_topology(t).node_count >= 2);
    }
    CHECK_THROWS_AS(preset("bogus"), std::invalid_argument);

    auto single = preset("single-hop");
    CHECK(single.topologies ==
          std::vector<std::string>{"complete:4", "complete:8", "complete:16", "complete:32"});
    CHECK(single.protocols.size() == 3);

    auto overhead = preset("overhead");
    CHECK(overhead.betas == std::vector<int>{0, 4, 8, 12, 16, 20});
    CHECK(overhead.protocols == std::vector<ProtocolKind>{ProtocolKind::MDwarf});
    CHECK(overhead.topologies == std::vector<std::string>{"star:10"});

    auto multi = preset("multi-hop");
    CHECK(multi.topologies.size() == 9); // incl. dumbbell-20 and the mesh

    auto sweep = preset("period-sweep");
    CHECK(sweep.periods_ms == std::vector<double>{1000.0, 2000.0, 3000.0});
    CHECK(sweep.topologies == std::vector<std::string>{"star:30"});
}

TEST_CASE("config text parsing and overrides") {
    std::string text = "# experiment\n"
                       "name = demo\n"
                       "protocols = mdwarf, extdesync\n"
                       "topologies = star:6, chain:10\n"
                       "T = 1000, 2000\n"
                       "periods = 120\n"
                       "seeds = 5\n"
                       "beta = 0, 4\n"
                       "[mdwarf]\n"
                       "c1 = 0.0005\n"
                       "[extdesync]\n"
                       "alpha = 0.9\n"
                       "[lightweight]\n"
                       "guard_ms = 0.25\n";
    auto spec = spec_from_config(parse_config_text(text));
    CHECK(spec.name == "demo");
    CHECK(spec.protocols.size() == 2);
    CHECK(spec.topologies == std::vector<std::string>{"star:6", "chain:10"});
    CHECK(spec.periods_ms == std::vector<double>{1000.0, 2000.0});
    CHECK(spec.periods == 120);
    CHECK(spec.seeds == 5);
    CHECK(spec.betas == std::vector<int>{0, 4});
    CHECK(spec.proto.mdwarf.c1 == doctest::Approx(0.0005));
    CHECK(spec.proto.extdesync.alpha == doctest::Approx(0.9));
    CHECK(spec.proto.lightweight.guard_ms == doctest::Approx(0.25));

    ExperimentSpec o;
    apply_override(o, "extdesync.alpha", "0.5");
    CHECK(o.proto.extdesync.alpha == doctest::Approx(0.5));
    CHECK_THROWS_AS(apply_override(o, "run.bogus", "1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("key value\n"), std::invalid_argument);
}

TEST_CASE("experiment run shape and determinism") {
    auto spec = tiny_spec();
    auto a = run_experiment(spec, 2);
    auto b = run_experiment(spec, 1);
    REQUIRE(a.runs.size() == 6); // 2 protocols x 1 topology x 3 seeds
    // order independent of worker count, traces bit-identical
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        CHECK(a.runs[i].key.seed == b.runs[i].key.seed);
        CHECK(a.runs[i].trace.phases == b.runs[i].trace.phases);
    }
    // seed derivation: base_seed + k
    CHECK(a.runs[0].key.seed == spec.base_seed);
    CHECK(a.runs[2].key.seed == spec.base_seed + 2);
}

TEST_CASE("phases csv is byte-identical across reruns") {
    auto spec = tiny_spec();
    std::ostringstream s1, s2;
    write_phases_csv(run_experiment(spec, 3), s1);
    write_phases_csv(run_experiment(spec, 1), s2);
    CHECK(s1.str() == s2.str());
    // schema header and row count: periods x nodes per run
    std::istringstream in(s1.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema=desyncsim-phases-v1");
    long rows = 0;
    std::getline(in, line); // column header
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 6L * 40 * 4);
}

TEST_CASE("summary means match per-seed metrics") {
    auto spec = tiny_spec();
    auto bundle = run_experiment(spec);
    std::ostringstream metrics, summary;
    write_metrics_csv(bundle, metrics);
    write_summary_csv(bundle, summary);

    // recompute the mdwarf group mean from the bundle and compare at 1e-9
    double sum = 0;
    int count = 0;
    for (const auto& run : bundle.runs)
        if (run.key.protocol == ProtocolKind::MDwarf) {
            sum += run.metrics.nrmse;
            ++count;
        }
    double expected = sum / count;

    std::istringstream in(summary.str());
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line); // first data row = mdwarf group
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    REQUIRE(cols.size() == 13);
    CHECK(cols[1] == "mdwarf");
    CHECK(std::stod(cols[7]) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("phases csv round-trips through report recomputation") {
    auto spec = tiny_spec();
    auto bundle = run_experiment(spec);
    std::ostringstream out;
    write_phases_csv(bundle, out);
    std::istringstream in(out.str());
    auto rebuilt = read_phases_csv(in, spec);
    REQUIRE(rebuilt.runs.size() == bundle.runs.size());
    for (std::size_t i = 0; i < bundle.runs.size(); ++i) {
        CHECK(rebuilt.runs[i].key.seed == bundle.runs[i].key.seed);
        CHECK(rebuilt.runs[i].trace.periods == bundle.runs[i].trace.periods);
        // phases survive the %.6f round trip to half a micro-ms
        for (int p = 0; p < bundle.runs[i].trace.periods; ++p)
            for (int node = 0; node < bundle.runs[i].trace.node_count; ++node)
                CHECK(rebuilt.runs[i].trace.phases[p][node] ==
                      doctest::Approx(bundle.runs[i].trace.phases[p][node]).epsilon(1e-6));
    }
}

TEST_CASE("bundle writing creates versioned files and charts") {
    namespace fs = std::filesystem;
    auto spec = tiny_spec();
    spec.seeds = 1;
    spec.out_dir = (fs::temp_directory_path() / "desync-bundle-test").string();
    fs::remove_all(spec.out_dir);
    auto bundle = run_experiment(spec);
    auto files = write_bundle(bundle, true);
    CHECK(fs::exists(fs::path(spec.out_dir) / "phases.csv"));
    CHECK(fs::exists(fs::path(spec.out_dir) / "metrics.csv"));
    CHECK(fs::exists(fs::path(spec.out_dir) / "summary.csv"));
    CHECK(files.size() == 3 + bundle.runs.size() + 1); // csvs + per-run charts + error chart
    for (const auto& f : files) CHECK(fs::file_size(f) > 0);
    fs::remove_all(spec.out_dir);
}

TEST_CASE("star6 average case matches the comparison table") {
    // M-DWARF: fast convergence, high stability, fair; LIGHTWEIGHT: unfair.
    auto imap = two_hop(make_star(6));
    MetricParams params;
    int md_fast_high_fair = 0, lw_unfair = 0;
    const int seeds = 10;
    for (int k = 0; k < seeds; ++k) {
        RunConfig cfg;
        cfg.topology = make_star(6);
        cfg.periods = 300;
        cfg.seed = 1000 + k;
        cfg.protocol = ProtocolKind::MDwarf;
        auto md = classify(run(cfg), imap, params);
        if (md.convergence == ConvergenceClass::Fast && md.stability == StabilityClass::High &&
            md.fair)
            ++md_fast_high_fair;
        cfg.protocol = ProtocolKind::Lightweight;
        auto lw = classify(run(cfg), imap, params);
        if (!lw.fair) ++lw_unfair;
    }
    CHECK(md_fast_high_fair >= 8);
    CHECK(lw_unfair >= 8);
}

TEST_CASE("star6 average run settles into six distinct bands") {
    auto spec = preset("multi-hop");
    spec.protocols = {ProtocolKind::MDwarf};
    spec.topologies = {"star:6"};
    spec.seeds = 5;
    auto bundle = run_experiment(spec);
    int six_bands = 0;
    for (const auto& run : bundle.runs)
        if (run.metrics.converged_at && run.metrics.slots == 6 && run.metrics.slots_valid)
            ++six_bands;
    CHECK(six_bands >= 4);
}
