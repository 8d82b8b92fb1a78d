#ifndef MANET_VHR_HPP
#define MANET_VHR_HPP

#include <map>
#include <optional>

#include "manet/core.hpp"
#include "manet/messages.hpp"

namespace manet {

/// Virtual Home Region parameters.
struct VhrConfig {
    double region_radius = 200.0;   // meters around the hashed center
    double update_threshold = 50.0; // U: report when displacement exceeds this
    double field_width = 1000.0;
    double field_height = 1000.0;
};

/// Fixed center of a node's VHR: the id digest split into two 64-bit
/// halves, each reduced modulo the field dimension. Deterministic, and
/// empirically near-uniform over the field.
Position vhr_center(NodeId id, double field_width, double field_height);

inline bool in_vhr_region(const Position& server_pos, NodeId node, const VhrConfig& cfg) {
    return distance(server_pos, vhr_center(node, cfg.field_width, cfg.field_height)) <=
           cfg.region_radius;
}

struct PositionRecord {
    NodeId node = 0;
    Position pos;
    SimTime update_time = 0;
    AuthCode auth_code = 0;
};

/// Per-server record store for the nodes whose VHR contains this server.
class ServerRecords {
  public:
    /// Full overwrite from a PosUpdate (fresh auth code every time).
    void apply_update(const PosUpdatePayload& u) {
        m_records[u.node] = PositionRecord{u.node, u.pos, u.update_time, u.code};
    }

    /// Mobility alert: position and time move, the auth code is preserved.
    /// Creates the record when the node is unknown.
    void apply_mobility_notice(NodeId node, const Position& new_pos, SimTime at) {
        auto it = m_records.find(node);
        if (it == m_records.end()) {
            m_records[node] = PositionRecord{node, new_pos, at, 0};
        } else if (at >= it->second.update_time) {
            it->second.pos = new_pos;
            it->second.update_time = at;
        }
    }

    std::optional<PositionRecord> lookup(NodeId node) const {
        auto it = m_records.find(node);
        if (it == m_records.end()) return std::nullopt;
        return it->second;
    }

    /// Resolves a claimed position to the recorded node nearest to it,
    /// within `tolerance`. Used to de-pseudonymize contention winners for
    /// path-selector checks.
    std::optional<NodeId> resolve_position(const Position& claimed, double tolerance) const {
        std::optional<NodeId> best;
        double best_d = tolerance;
        for (const auto& [id, rec] : m_records) {
            const double d = distance(rec.pos, claimed);
            if (d <= best_d) {
                best_d = d;
                best = id;
            }
        }
        return best;
    }

    const std::map<NodeId, PositionRecord>& records() const { return m_records; }

  private:
    std::map<NodeId, PositionRecord> m_records;
};

} // namespace manet

#endif
