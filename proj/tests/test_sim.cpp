#include <doctest.h>

#include <memory>

#include "desync/extdesync.hpp"
#include "desync/mdwarf.hpp"
#include "desync/phase_math.hpp"
#include "desync/sim.hpp"

using namespace desync;

namespace {

// Keeps its phase forever; optionally relays like the real protocols.
class StaticNode : public Protocol {
public:
    StaticNode(const ProtocolContext& ctx, bool relay)
        : ctx_(ctx), relay_(relay), table_(ctx.node_count, ctx.node_id, ctx.period_ms) {}

    FiringResult on_fire(double now_ms, double phase_ms) override {
        double prev = fired_ ? last_fire_ : now_ms - ctx_.period_ms;
        table_.expire(prev);
        last_fire_ = now_ms;
        fired_ = true;
        FiringResult res;
        if (relay_) res.payload = table_.payload_entries(now_ms);
        res.next_phase_ms = phase_ms;
        return res;
    }

    void on_receive(const Frame& f, double rx, double decode) override {
        table_.on_receive(f, rx, decode);
        ++received;
    }

    const NeighborTable& table() const { return table_; }
    int received = 0;

private:
    ProtocolContext ctx_;
    bool relay_;
    NeighborTable table_;
    double last_fire_ = 0.0;
    bool fired_ = false;
};

// Forwards to a shared instance so tests can inspect state after run().
class SharedProtocol : public Protocol {
public:
    explicit SharedProtocol(std::shared_ptr<Protocol> impl) : impl_(std::move(impl)) {}
    FiringResult on_fire(double now, double phase) override { return impl_->on_fire(now, phase); }
    void on_receive(const Frame& f, double rx, double decode) override {
        impl_->on_receive(f, rx, decode);
    }

private:
    std::shared_ptr<Protocol> impl_;
};

struct StaticFleet {
    std::vector<std::shared_ptr<StaticNode>> nodes;

    ProtocolFactory factory(bool relay = false) {
        return [this, relay](int, const ProtocolContext& ctx, Rng) {
            auto node = std::make_shared<StaticNode>(ctx, relay);
            nodes.push_back(node);
            return std::make_unique<SharedProtocol>(node);
        };
    }
};

} // namespace

TEST_CASE("hidden terminal: simultaneous far senders collide at the middle") {
    RunConfig cfg;
    cfg.topology = make_chain(3);
    cfg.periods = 1;
    cfg.initial_phases = {200.0, 600.0, 200.0}; // 0 and 2 fire together

    StaticFleet fleet;
    RunTrace trace = run(cfg, fleet.factory());

    CHECK(fleet.nodes[1]->received == 0);     // both frames dropped at node 1
    CHECK(trace.node_collisions[0][1] == 2);  // two dropped deliveries there
    CHECK(trace.collisions[0] == 2);
    CHECK(fleet.nodes[0]->received == 1);     // node 1's own frame is clean
    CHECK(fleet.nodes[2]->received == 1);
}

TEST_CASE("partial overlap also collides") {
    RunConfig cfg;
    cfg.topology = make_chain(3);
    cfg.periods = 1;
    cfg.initial_phases = {200.0, 600.0, 200.2}; // overlap: airtime 0.416 > 0.2

    StaticFleet fleet;
    RunTrace trace = run(cfg, fleet.factory());
    CHECK(fleet.nodes[1]->received == 0);
    CHECK(trace.collisions[0] == 2);
}

TEST_CASE("non-overlapping frames deliver") {
    RunConfig cfg;
    cfg.topology = make_chain(3);
    cfg.periods = 1;
    cfg.initial_phases = {200.0, 600.0, 201.0}; // gap exceeds airtime

    StaticFleet fleet;
    RunTrace trace = run(cfg, fleet.factory());
    CHECK(fleet.nodes[1]->received == 2);
    CHECK(trace.collisions[0] == 0);
}

TEST_CASE("a node receives while transmitting") {
    // Coincident one-hop nodes still hear each other: only one frame is
    // audible at each receiver.
    RunConfig cfg;
    cfg.topology = make_chain(2);
    cfg.periods = 1;
    cfg.initial_phases = {300.0, 300.0};

    StaticFleet fleet;
    RunTrace trace = run(cfg, fleet.factory());
    CHECK(fleet.nodes[0]->received == 1);
    CHECK(fleet.nodes[1]->received == 1);
    CHECK(trace.collisions[0] == 0);
}

TEST_CASE("frames never deliver beyond one hop") {
    RunConfig cfg;
    cfg.topology = make_chain(4);
    cfg.periods = 3;
    cfg.initial_phases = {100.0, 300.0, 500.0, 700.0};

    StaticFleet fleet;
    run(cfg, fleet.factory(false));
    // without relaying, node 3 never learns about nodes 0 or 1
    CHECK(fleet.nodes[3]->table().find(0) == nullptr);
    CHECK(fleet.nodes[3]->table().find(1) == nullptr);
    CHECK(fleet.nodes[3]->table().find(2) != nullptr);
    // each interior node hears both neighbors every period
    CHECK(fleet.nodes[1]->received == 2 * 3);
}

TEST_CASE("relaying builds exact two-hop knowledge") {
    RunConfig cfg;
    cfg.topology = make_chain(3);
    cfg.periods = 3;
    cfg.initial_phases = {100.0, 300.0, 500.0};

    StaticFleet fleet;
    run(cfg, fleet.factory(true));
    const auto* rec = fleet.nodes[2]->table().find(0);
    REQUIRE(rec != nullptr);
    CHECK(rec->hops == 2);
    // node 0 fires at integral phases, so the relayed timeline is exact:
    // its last firing before node 1's period-2 firing was at 2100
    CHECK(mod_pos(rec->last_fire_ms, 1000.0) == doctest::Approx(100.0));
}

TEST_CASE("single node holds its phase under every protocol") {
    for (auto kind : {ProtocolKind::MDwarf, ProtocolKind::ExtDesync, ProtocolKind::Lightweight}) {
        RunConfig cfg;
        cfg.topology.node_count = 1;
        cfg.protocol = kind;
        cfg.periods = 20;
        cfg.seed = 9;
        RunTrace trace = run(cfg);
        for (int p = 0; p < 20; ++p)
            CHECK(trace.phases[p][0] == trace.initial_phases[0]);
    }
}

TEST_CASE("identical seeds give identical traces") {
    for (auto kind : {ProtocolKind::MDwarf, ProtocolKind::ExtDesync, ProtocolKind::Lightweight}) {
        RunConfig cfg;
        cfg.topology = make_star(6);
        cfg.protocol = kind;
        cfg.periods = 50;
        cfg.seed = 12345;
        RunTrace a = run(cfg);
        RunTrace b = run(cfg);
        CHECK(a.initial_phases == b.initial_phases);
        CHECK(a.phases == b.phases);
        CHECK(a.collisions == b.collisions);
        CHECK(a.fires == b.fires);
        CHECK(a.receives == b.receives);
    }
}

TEST_CASE("different seeds give different initial phases") {
    RunConfig cfg;
    cfg.topology = make_star(4);
    cfg.periods = 1;
    cfg.seed = 1;
    RunTrace a = run(cfg);
    cfg.seed = 2;
    RunTrace b = run(cfg);
    CHECK(a.initial_phases != b.initial_phases);
}

TEST_CASE("phase samples stay in range and fire counts match") {
    RunConfig cfg;
    cfg.topology = make_star(8);
    cfg.protocol = ProtocolKind::MDwarf;
    cfg.periods = 40;
    cfg.seed = 77;
    RunTrace trace = run(cfg);
    for (const auto& row : trace.phases)
        for (double phi : row) {
            CHECK(phi >= 0.0);
            CHECK(phi < cfg.period_ms);
        }
    for (long f : trace.fires) CHECK(f == 40);
}

TEST_CASE("invalid configs are rejected") {
    RunConfig cfg;
    cfg.topology = make_star(4);
    cfg.proto.beta = -1;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg.proto.beta = 0;
    cfg.period_ms = 0.0;
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg.period_ms = 70000.0; // beyond the 2-byte phase encoding
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
    cfg.period_ms = 1000.0;
    cfg.initial_phases = {1.0, 2.0}; // wrong size
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);
}

TEST_CASE("high saving gain makes relayed records expire intermittently") {
    // star-10 at beta=20: leaves hear other leaves only via center payloads
    // every 21 periods, so those records spend most periods expired.
    struct Probe : Protocol {
        MDwarf inner;
        int* min_live;
        int* max_live;
        Probe(const ProtocolContext& ctx, const ProtocolConfig& cfg, int* mn, int* mx)
            : inner(ctx, cfg.mdwarf, cfg.beta), min_live(mn), max_live(mx) {}
        FiringResult on_fire(double now, double phase) override {
            auto res = inner.on_fire(now, phase);
            int live = inner.table().live_count();
            *min_live = std::min(*min_live, live);
            *max_live = std::max(*max_live, live);
            return res;
        }
        void on_receive(const Frame& f, double rx, double decode) override {
            inner.on_receive(f, rx, decode);
        }
    };

    RunConfig cfg;
    cfg.topology = make_star(10);
    cfg.periods = 80;
    cfg.seed = 5;
    cfg.proto.beta = 20;
    // track node 3 (a leaf); spread phases so nothing collides
    for (int i = 0; i < 10; ++i) cfg.initial_phases.push_back(25.0 + 95.0 * i);
    auto min_live = std::make_shared<int>(99);
    auto max_live = std::make_shared<int>(0);
    auto factory = [&](int id, const ProtocolContext& ctx, Rng rng) -> std::unique_ptr<Protocol> {
        if (id == 3) return std::make_unique<Probe>(ctx, cfg.proto, min_live.get(), max_live.get());
        return make_protocol(ProtocolKind::MDwarf, ctx, cfg.proto, std::move(rng));
    };
    run(cfg, factory);
    CHECK(*max_live == 9); // right after a payload the whole two-hop view is known
    CHECK(*min_live == 1); // between payloads everything but the center expires
}

TEST_CASE("lightweight 2-clique separates identical phases within ten periods") {
    RunConfig cfg;
    cfg.topology = make_chain(2);
    cfg.protocol = ProtocolKind::Lightweight;
    cfg.periods = 10;
    cfg.initial_phases = {500.0, 500.0};
    double width = airtime_ms(0, 250000.0) + 1.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        cfg.seed = seed;
        auto trace = run(cfg);
        const auto& fin = trace.phases.back();
        CHECK(circ_dist(fin[0], fin[1], 1000.0) >= width);
    }
}
