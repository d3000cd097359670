#include "desync/sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "desync/extdesync.hpp"
#include "desync/lightweight.hpp"
#include "desync/mdwarf.hpp"
#include "desync/phase_math.hpp"

namespace desync {

namespace {

// Event kinds, in tie-break order at equal timestamps: a frame that finishes
// exactly at a boundary decodes before the boundary sample, and a sample is
// taken before any firing scheduled at the same instant.
enum EventKind : int { kDecode = 0, kSample = 1, kFire = 2 };

struct Event {
    double time;
    int kind;
    int node; // firing node, decode frame sender, or -1 for samples
    std::uint64_t seq;
    int payload; // frame index for decodes, period index for samples

    bool operator>(const Event& other) const {
        if (time != other.time) return time > other.time;
        if (kind != other.kind) return kind > other.kind;
        if (node != other.node) return node > other.node;
        return seq > other.seq;
    }
};

struct InFlight {
    Frame frame;
    int period = 0;
};

} // namespace

RunTrace run(const RunConfig& cfg, const ProtocolFactory& factory) {
    const int n = cfg.topology.node_count;
    const double T = cfg.period_ms;
    if (n <= 0) throw std::invalid_argument("run: empty topology");
    if (T <= 0.0) throw std::invalid_argument("run: period must be positive");
    if (T >= 65536.0) throw std::invalid_argument("run: period exceeds 2-byte phase encoding");
    if (cfg.periods <= 0) throw std::invalid_argument("run: period count must be positive");
    if (cfg.proto.beta < 0) throw std::invalid_argument("run: saving gain must be non-negative");
    if (cfg.bitrate_bps <= 0.0) throw std::invalid_argument("run: bitrate must be positive");
    if (!cfg.initial_phases.empty() && static_cast<int>(cfg.initial_phases.size()) != n)
        throw std::invalid_argument("run: initial phase override size mismatch");

    auto adj = cfg.topology.adjacency();
    int max_degree = 0;
    for (const auto& a : adj) max_degree = std::max(max_degree, static_cast<int>(a.size()));
    const double max_airtime = airtime_ms(max_degree, cfg.bitrate_bps);

    RunTrace trace;
    trace.node_count = n;
    trace.periods = cfg.periods;
    trace.period_ms = T;
    trace.phases.assign(cfg.periods, std::vector<double>(n, 0.0));
    trace.collisions.assign(cfg.periods, 0);
    trace.node_collisions.assign(cfg.periods, std::vector<int>(n, 0));
    trace.fires.assign(n, 0);
    trace.receives.assign(n, 0);

    std::vector<std::unique_ptr<Protocol>> protocols;
    std::vector<double> phase(n);
    std::vector<int> node_period(n, 0);
    protocols.reserve(n);
    for (int i = 0; i < n; ++i) {
        ProtocolContext ctx{i, n, T, cfg.bitrate_bps};
        Rng rng = Rng::for_node(cfg.seed, i);
        phase[i] = cfg.initial_phases.empty() ? rng.uniform(0.0, T) : cfg.initial_phases[i];
        protocols.push_back(factory(i, ctx, std::move(rng)));
    }
    trace.initial_phases = phase;

    std::vector<InFlight> frames;
    frames.reserve(static_cast<std::size_t>(n) * cfg.periods);
    std::vector<std::vector<int>> audible(n); // frame indices heard at each node

    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    std::uint64_t seq = 0;
    for (int i = 0; i < n; ++i) queue.push({phase[i], kFire, i, seq++, -1});
    for (int p = 0; p < cfg.periods; ++p)
        queue.push({(static_cast<double>(p) + 1.0) * T, kSample, -1, seq++, p});

    while (!queue.empty()) {
        Event ev = queue.top();
        queue.pop();

        if (ev.kind == kSample) {
            trace.phases[ev.payload] = phase;
            continue;
        }

        if (ev.kind == kFire) {
            int i = ev.node;
            int p = node_period[i];
            if (p >= cfg.periods) continue;
            double now = ev.time;

            FiringResult res = protocols[i]->on_fire(now, phase[i]);

            InFlight fl;
            fl.frame.sender = i;
            fl.frame.emit_ms = now;
            fl.frame.has_payload = res.payload.has_value();
            if (res.payload) fl.frame.entries = std::move(*res.payload);
            fl.frame.airtime_ms =
                airtime_ms(static_cast<int>(fl.frame.entries.size()), cfg.bitrate_bps);
            fl.period = p;
            int frame_idx = static_cast<int>(frames.size());
            frames.push_back(std::move(fl));
            for (int r : adj[i]) audible[r].push_back(frame_idx);
            queue.push({frames[frame_idx].frame.end_ms(), kDecode, i, seq++, frame_idx});

            trace.fires[i]++;
            phase[i] = mod_pos(res.next_phase_ms, T);
            node_period[i] = p + 1;
            if (p + 1 < cfg.periods)
                queue.push({(static_cast<double>(p) + 1.0) * T + phase[i], kFire, i, seq++, -1});
            continue;
        }

        // Decode: the frame's interval is now fully known, as is every frame
        // that could overlap it (later frames start at or after this end).
        const InFlight& fl = frames[ev.payload];
        const Frame& f = fl.frame;
        for (int r : adj[f.sender]) {
            auto& heard = audible[r];
            bool collided = false;
            std::size_t keep = 0;
            for (std::size_t idx = 0; idx < heard.size(); ++idx) {
                const Frame& g = frames[heard[idx]].frame;
                // Prune frames that can no longer overlap anything still in flight.
                if (g.end_ms() <= ev.time - max_airtime && heard[idx] != ev.payload) continue;
                heard[keep++] = heard[idx];
                if (heard[idx] == ev.payload) continue;
                if (g.emit_ms < f.end_ms() && g.end_ms() > f.emit_ms) collided = true;
            }
            heard.resize(keep);
            if (collided) {
                int period = std::min(fl.period, cfg.periods - 1);
                trace.collisions[period]++;
                trace.node_collisions[period][r]++;
            } else {
                protocols[r]->on_receive(f, f.emit_ms, ev.time);
                trace.receives[r]++;
            }
        }
    }

    return trace;
}

RunTrace run(const RunConfig& cfg) {
    return run(cfg, [&cfg](int, const ProtocolContext& ctx, Rng rng) {
        return make_protocol(cfg.protocol, ctx, cfg.proto, std::move(rng));
    });
}

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const ProtocolContext& ctx,
                                        const ProtocolConfig& cfg, Rng rng) {
    switch (kind) {
    case ProtocolKind::MDwarf:
        return std::make_unique<MDwarf>(ctx, cfg.mdwarf, cfg.beta);
    case ProtocolKind::ExtDesync:
        return std::make_unique<ExtDesync>(ctx, cfg.extdesync, cfg.beta);
    case ProtocolKind::Lightweight:
        return std::make_unique<Lightweight>(ctx, cfg.lightweight, std::move(rng));
    }
    throw std::invalid_argument("unknown protocol kind");
}

ProtocolKind parse_protocol(const std::string& name) {
    if (name == "mdwarf") return ProtocolKind::MDwarf;
    if (name == "extdesync") return ProtocolKind::ExtDesync;
    if (name == "lightweight") return ProtocolKind::Lightweight;
    throw std::invalid_argument("unknown protocol: " + name);
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::MDwarf: return "mdwarf";
    case ProtocolKind::ExtDesync: return "extdesync";
    case ProtocolKind::Lightweight: return "lightweight";
    }
    return "?";
}

} // namespace desync
