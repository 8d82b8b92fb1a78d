#include "manet/neighbor.hpp"

namespace manet {
namespace {

void penalize(NeighborTable& table, NodeId who, int penalty) {
    auto it = table.find(who);
    if (it == table.end()) {
        // first contact is already a violation: distrusted stub, no position
        NeighborEntry e;
        e.id = who;
        e.trust_value = kTrustMin;
        table[who] = e;
        return;
    }
    it->second.trust_value = clamp_trust(it->second.trust_value - penalty);
}

void store_claim(NeighborEntry& e, const BeaconPayload& b, SimTime now) {
    e.position = b.pos;
    e.has_position = true;
    e.last_beacon_time = now;
    e.tusn = b.tusn;
}

} // namespace

BeaconVerdict verify_beacon_range(NeighborTable& table, const Position& own_pos,
                                  const BeaconPayload& beacon, SimTime now,
                                  const VerifyConfig& cfg) {
    if (distance(own_pos, beacon.pos) <= cfg.range_threshold) {
        auto it = table.find(beacon.sender);
        if (it != table.end()) {
            store_claim(it->second, beacon, now);
            return BeaconVerdict::AcceptedUpdate;
        }
        NeighborEntry e;
        e.id = beacon.sender;
        store_claim(e, beacon, now);
        table[beacon.sender] = e;
        return BeaconVerdict::AcceptedNew;
    }
    penalize(table, beacon.sender, cfg.trust_penalty);
    return BeaconVerdict::RejectedRange;
}

BeaconVerdict verify_beacon_mobility(NeighborTable& table, const BeaconPayload& beacon,
                                     SimTime now, const VerifyConfig& cfg) {
    auto it = table.find(beacon.sender);
    if (it == table.end() || !it->second.has_position) {
        NeighborEntry e = (it == table.end()) ? NeighborEntry{} : it->second;
        e.id = beacon.sender;
        store_claim(e, beacon, now);
        table[beacon.sender] = e;
        return BeaconVerdict::AcceptedNew;
    }

    NeighborEntry& entry = it->second;
    const SimTime t_last = entry.last_beacon_time;
    const double moved = distance(beacon.pos, entry.position);
    bool ok;
    if (now <= t_last) {
        ok = moved == 0.0; // zero interval is a violation unless stationary
    } else {
        const double dt = micros_to_seconds(now - t_last);
        ok = (moved / dt) <= cfg.max_speed;
    }
    if (ok) {
        store_claim(entry, beacon, now);
        return BeaconVerdict::AcceptedUpdate;
    }
    entry.trust_value = clamp_trust(entry.trust_value - cfg.trust_penalty);
    return BeaconVerdict::RejectedMobility;
}

BeaconVerdict process_beacon(NeighborTable& table, const Position& own_pos,
                             const BeaconPayload& beacon, SimTime now, const VerifyConfig& cfg) {
    // Range check runs on a scratch copy so a range reject does not
    // pre-register the claim for the mobility check.
    if (distance(own_pos, beacon.pos) > cfg.range_threshold) {
        penalize(table, beacon.sender, cfg.trust_penalty);
        return BeaconVerdict::RejectedRange;
    }
    return verify_beacon_mobility(table, beacon, now, cfg);
}

} // namespace manet
