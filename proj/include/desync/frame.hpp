#pragma once

#include <cstdint>
#include <vector>

namespace desync {

// Wire layout: 11-byte radio header, 2-byte sender id, then k entries of
// 2-byte neighbor id + 2-byte relative phase (ms, quantized).
inline constexpr int kRadioHeaderBytes = 11;
inline constexpr int kSenderIdBytes = 2;
inline constexpr int kPayloadEntryBytes = 4;

struct PayloadEntry {
    std::uint16_t id = 0;
    std::uint16_t rel_phase_ms = 0; // (sender fire time - neighbor fire time) mod T
};

struct Frame {
    int sender = -1;
    double emit_ms = 0.0;
    double airtime_ms = 0.0;
    bool has_payload = false; // bare beacon when false (sender id only)
    std::vector<PayloadEntry> entries;

    double end_ms() const { return emit_ms + airtime_ms; }
};

// On-air duration for a frame carrying `payload_entries` relayed phases.
inline double airtime_ms(int payload_entries, double bitrate_bps) {
    int bytes = kRadioHeaderBytes + kSenderIdBytes + kPayloadEntryBytes * payload_entries;
    return static_cast<double>(bytes) * 8.0 * 1000.0 / bitrate_bps;
}

} // namespace desync
