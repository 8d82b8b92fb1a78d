#ifndef MANET_DEFENSE_HPP
#define MANET_DEFENSE_HPP

#include <map>
#include <set>
#include <tuple>

#include "manet/core.hpp"
#include "manet/rng.hpp"

namespace manet {

/// Scenario-configured adversary behavior.
struct AdversaryProfile {
    enum class Kind { Dropper, Sybil };

    NodeId node = 0;
    Kind kind = Kind::Dropper;
    double drop_p = 0.0;  // dropper: data drop probability
    Position claimed_pos; // sybil: false position claimed in hreps
};

/// forward (true) or drop (false) for a node holding a dropper profile.
inline bool adversary_forwards(const AdversaryProfile& profile, Rng& rng) {
    if (profile.kind != AdversaryProfile::Kind::Dropper) return true;
    return !rng.chance(profile.drop_p);
}

/// Data packet identity for watchdog bookkeeping.
struct PacketKey {
    std::uint64_t flow_id = 0;
    std::uint64_t request_id = 0;
    int attempt = 0;
    std::uint64_t seq = 0;

    bool operator<(const PacketKey& o) const {
        return std::tie(flow_id, request_id, attempt, seq) <
               std::tie(o.flow_id, o.request_id, o.attempt, o.seq);
    }
    bool operator==(const PacketKey& o) const {
        return flow_id == o.flow_id && request_id == o.request_id && attempt == o.attempt &&
               seq == o.seq;
    }
};

/// Server-side watchdog: a pending buffer per watched node. A packet
/// received for forwarding must be transmitted onward before its deadline
/// or the node's failure rate increments.
class Watchdog {
  public:
    Watchdog(SimTime timeout, int flag_threshold)
        : m_timeout(timeout), m_threshold(flag_threshold) {}

    SimTime timeout() const { return m_timeout; }

    /// Node received a packet it is expected to forward. Returns the
    /// deadline by which the forward must be observed.
    SimTime observe_receive(NodeId node, const PacketKey& pkt, SimTime now) {
        const SimTime deadline = now + m_timeout;
        m_pending[{node, pkt}] = deadline;
        return deadline;
    }

    /// Node transmitted the packet onward; the entry is forgotten.
    /// Returns false for an unmatched transmit (duplicate or ordering
    /// artifact; callers log it).
    bool observe_forward(NodeId node, const PacketKey& pkt) {
        return m_pending.erase({node, pkt}) > 0;
    }

    /// Deadline check for one entry; increments the failure rate when the
    /// packet is still pending. Returns true when a failure was recorded.
    bool expire(NodeId node, const PacketKey& pkt, SimTime now) {
        auto it = m_pending.find({node, pkt});
        if (it == m_pending.end() || now < it->second) return false;
        m_pending.erase(it);
        ++m_failure_rate[node];
        return true;
    }

    int failure_rate(NodeId node) const {
        auto it = m_failure_rate.find(node);
        return it == m_failure_rate.end() ? 0 : it->second;
    }

    bool is_misbehaving(NodeId node) const { return failure_rate(node) >= m_threshold; }

    const std::map<NodeId, int>& failure_rates() const { return m_failure_rate; }
    std::size_t pending_count() const { return m_pending.size(); }

  private:
    SimTime m_timeout;
    int m_threshold;
    std::map<std::pair<NodeId, PacketKey>, SimTime> m_pending;
    std::map<NodeId, int> m_failure_rate;
};

enum class PathSelectorVerdict { Allow, AllowUnknown, Deny };

/// Gate applied to de-pseudonymized contention winners: watchdog-flagged
/// nodes never enter a route. Unknown nodes default to allow.
inline PathSelectorVerdict pathselector_check(const Watchdog& wd, bool resolved, NodeId candidate) {
    if (!resolved) return PathSelectorVerdict::AllowUnknown;
    return wd.is_misbehaving(candidate) ? PathSelectorVerdict::Deny : PathSelectorVerdict::Allow;
}

} // namespace manet

#endif
