#ifndef MANET_NEIGHBOR_HPP
#define MANET_NEIGHBOR_HPP

#include <map>

#include "manet/core.hpp"
#include "manet/messages.hpp"

namespace manet {

/// Per-neighbor record maintained from beacons and handshakes.
struct NeighborEntry {
    NodeId id = 0;
    Position position;
    bool has_position = false;
    SimTime last_beacon_time = 0;
    Digest public_key{};
    bool has_key = false;
    int trust_value = 0;
    std::uint64_t tusn = 0;
};

using NeighborTable = std::map<NodeId, NeighborEntry>;

struct VerifyConfig {
    double range_threshold = 300.0; // T: acceptance range
    double max_speed = 20.0;        // mobility ceiling, m/s
    int trust_penalty = 1;          // decrement per violation
};

enum class BeaconVerdict {
    AcceptedNew,
    AcceptedUpdate,
    RejectedRange,
    RejectedMobility,
};

inline bool beacon_accepted(BeaconVerdict v) {
    return v == BeaconVerdict::AcceptedNew || v == BeaconVerdict::AcceptedUpdate;
}

/// Range-based position verification. Claims within T of the receiver are
/// accepted (entry added or its position updated); claims beyond T drop the
/// beacon and cost the sender trust_penalty (floor 0).
BeaconVerdict verify_beacon_range(NeighborTable& table, const Position& own_pos,
                                  const BeaconPayload& beacon, SimTime now,
                                  const VerifyConfig& cfg);

/// Mobility-based position verification: implied speed between consecutive
/// claims must not exceed max_speed. Unknown senders are added regardless.
/// Zero elapsed time counts as a violation unless the position is unchanged.
BeaconVerdict verify_beacon_mobility(NeighborTable& table, const BeaconPayload& beacon,
                                     SimTime now, const VerifyConfig& cfg);

/// Full beacon pipeline: range check, then mobility check.
BeaconVerdict process_beacon(NeighborTable& table, const Position& own_pos,
                             const BeaconPayload& beacon, SimTime now, const VerifyConfig& cfg);

/// Secure neighbor detection bound: with the hello/reply round trip taking
/// d = t1 - t0, the peer must be within (d/2)*c.
inline double handshake_distance_bound(SimTime t0, SimTime t1) {
    const SimTime d = t1 - t0;
    return (static_cast<double>(d) / 2.0) * kMetersPerMicro;
}

} // namespace manet

#endif
