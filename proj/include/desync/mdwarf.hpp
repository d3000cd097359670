#pragma once

#include "desync/neighbor_table.hpp"
#include "desync/protocol.hpp"

namespace desync {

// Repulsive force exerted by a neighbor at signed offset dphi. A neighbor
// ahead (dphi > 0) pushes the node backward, one behind pushes it forward;
// magnitude T/|dphi| decays with distance. |dphi| is clamped to eps_min.
// Near the antipode the magnitude tapers linearly to zero over the final
// taper_frac*T of offset, so a diametrically opposite neighbor exerts no
// net push and equally spaced rings are exact fixed points.
inline constexpr double kForceTaperFrac = 0.02;

double repulsive_force(double dphi, double period_ms, double eps_min_ms,
                       double taper_frac = kForceTaperFrac);

// One per-view-entry contribution after force absorption.
struct ForceContribution {
    int id = -1;
    double dphi = 0.0;
    double force = 0.0; // zero when absorbed
    bool absorbed = false;
};

// Apply force absorption to a phase view: within each side of the circle,
// entries whose |dphi| lies within eps_abs of the nearest entry of their
// coincidence cluster contribute nothing; one full force per cluster.
// self_id breaks the tie for entries exactly at dphi == 0.
std::vector<ForceContribution> absorb_forces(const std::vector<ViewEntry>& view,
                                             double period_ms, double eps_abs_ms,
                                             double eps_min_ms, int self_id);

double total_force(const std::vector<ForceContribution>& contributions);

// Update gain: K(n) = c1 * n^(-c2) with n = view size + 1.
double mdwarf_gain(const MdwarfConfig& cfg, int view_size);

class MDwarf : public Protocol {
public:
    MDwarf(const ProtocolContext& ctx, const MdwarfConfig& cfg, int beta);

    FiringResult on_fire(double now_ms, double phase_ms) override;
    void on_receive(const Frame& frame, double rx_ms, double decode_ms) override;

    const NeighborTable& table() const { return table_; }

private:
    ProtocolContext ctx_;
    MdwarfConfig cfg_;
    NeighborTable table_;
    RelayPolicy policy_;
    double last_fire_ms_;
    bool fired_ = false;
};

} // namespace desync
