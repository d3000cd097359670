#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "desync/frame.hpp"
#include "desync/rng.hpp"

namespace desync {

enum class ProtocolKind { MDwarf, ExtDesync, Lightweight };

ProtocolKind parse_protocol(const std::string& name);
std::string to_string(ProtocolKind kind);

struct MdwarfConfig {
    // Update gain K(n) = c1 * n^(-c2), applied as a fraction of T per force
    // unit. Calibrated so that single-neighbor pushes during record droughts
    // stay inside the convergence-detection band while full views still sort
    // dense rings quickly.
    double c1 = 4.0e-4;
    double c2 = 0.4;
    double eps_abs_frac = 0.01;  // absorption coincidence tolerance, fraction of T
    double eps_min_frac = 0.001; // minimum |dphi| clamp, fraction of T
};

struct ExtDesyncConfig {
    double alpha = 0.95; // jump step toward the midpoint, in (0, 1]
};

struct LightweightConfig {
    double guard_ms = 0.5; // guard on each side of the frame airtime
};

struct ProtocolConfig {
    MdwarfConfig mdwarf;
    ExtDesyncConfig extdesync;
    LightweightConfig lightweight;
    int beta = 0; // payload saving gain (relayed phases every beta+1 firings)
};

struct ProtocolContext {
    int node_id = -1;
    int node_count = 0;
    double period_ms = 0.0;
    double bitrate_bps = 250000.0;
};

// Outcome of one own firing: the payload to put on air (nullopt = bare
// beacon) and the phase for the next period.
struct FiringResult {
    std::optional<std::vector<PayloadEntry>> payload;
    double next_phase_ms = 0.0;
};

// Per-node protocol logic driven by the simulator. on_fire is invoked at
// every own firing and applies the phase-update rule using everything
// received since the previous firing; on_receive is invoked for each
// successfully decoded frame.
class Protocol {
public:
    virtual ~Protocol() = default;

    virtual FiringResult on_fire(double now_ms, double phase_ms) = 0;
    virtual void on_receive(const Frame& frame, double rx_ms, double decode_ms) = 0;
};

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const ProtocolContext& ctx,
                                        const ProtocolConfig& cfg, Rng rng);

} // namespace desync
