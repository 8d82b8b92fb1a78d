#ifndef MANET_NODE_HPP
#define MANET_NODE_HPP

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "manet/config.hpp"
#include "manet/contention.hpp"
#include "manet/defense.hpp"
#include "manet/keytoken.hpp"
#include "manet/kernel.hpp"
#include "manet/messages.hpp"
#include "manet/neighbor.hpp"
#include "manet/trust.hpp"
#include "manet/vhr.hpp"

namespace manet {

class Simulation;

struct RouteKey {
    std::uint64_t request_id = 0;
    int attempt = 0;

    bool operator<(const RouteKey& o) const {
        if (request_id != o.request_id) return request_id < o.request_id;
        return attempt < o.attempt;
    }
};

/// Anonymous route state: pseudo ids only. Real node ids never enter this
/// table; radio-level adjacency lives in LinkPair below.
struct RoutingTableEntry {
    PseudoId prev_pseudo;
    PseudoId next_pseudo;
    bool has_prev = false;
    bool has_next = false;
    bool is_source = false;
    bool is_destination = false;
};

/// Which physical neighbor answers to each end of a route segment. This is
/// radio-layer knowledge (the hrep/cnfm exchange happened over a direct
/// link), kept outside the routing table.
struct LinkPair {
    NodeId prev_link = 0;
    NodeId next_link = 0;
    bool has_prev = false;
    bool has_next = false;
};

/// Source-side discovery bookkeeping for one request.
struct DiscoverySession {
    std::uint64_t request_id = 0;
    std::uint64_t flow_id = 0;
    NodeId dest_node = 0;
    Position dest_pos;
    AuthCode expected_code = 0;
    bool have_position = false;
    SimTime started_at = 0;
    SimTime window_deadline = 0;
    int attempts_launched = 0;
    std::vector<RouteCandidate> candidates;
    bool closed = false;
    bool succeeded = false;
    int chosen = -1;
    std::uint64_t pos_query_id = 0;
    std::vector<NodeId> pos_servers_left; // fallback order for negative replies
};

/// Hop-sender state while searching for the next hop of a request.
struct HopSearch {
    std::uint64_t request_id = 0;
    int attempt = 0;
    int round = 0;
    Position dest_pos;
    int hop_count = 0;
    std::vector<PseudoId> excluded;
    bool awaiting_hrep = false;
    bool awaiting_validation = false;
    std::uint64_t validation_nonce = 0;
    HrepPayload pending_hrep;
    NodeId pending_winner_link = 0;
};

/// Contention-winner state while waiting for the sender's cnfm.
struct PendingWin {
    RreqPayload rreq;
    PseudoId my_pseudo;
    NodeId sender_link = 0;
    Position claimed_pos;
};

/// Destination-side duty for an answered request: alert bookkeeping.
struct DestDuty {
    std::uint64_t request_id = 0;
    int answered = 0;
    Position last_alert_pos;
    std::set<int> attempts; // reverse paths answered
};

struct FlowState {
    std::uint64_t flow_id = 0;
    NodeId dest = 0;
    std::uint64_t packets = 0;
    SimTime interval = 0;
    SimTime data_start = 0;
    std::uint64_t next_seq = 0;
    std::uint64_t request_id = 0;
    int chosen_attempt = 0;
    bool route_ready = false;
    bool route_stale = false;
    bool discovering = false;
    std::deque<std::uint64_t> held; // seqs waiting for a (re)discovered route
};

/// One protocol participant: beaconing and neighbor verification, VHR
/// client (and server role when designated), anonymous route discovery,
/// trust handling, data forwarding, misbehavior when so configured.
class ProtocolNode {
  public:
    ProtocolNode(Simulation& sim, NodeId id, KeyToken token, Certificate cert);

    NodeId id() const { return m_id; }

    // --- kernel-driven entry points -------------------------------------
    void bootstrap();
    void on_message(const Message& m, NodeId phys_sender, Channel ch);
    void on_mobility_tick();

    // --- discovery driver (source role) ---------------------------------
    void start_flow(const FlowSpec& spec, std::uint64_t flow_id);

    // --- contention callbacks (invoked by the simulation's round logic) --
    void contention_won(std::uint64_t request_id, int attempt, int round);
    void contention_heard_collision(std::uint64_t request_id, int attempt, int round);

    // --- state inspection (tests, invariants) ----------------------------
    const NeighborTable& neighbors() const { return m_neighbors; }
    const TrustStore& trust() const { return m_trust; }
    TrustStore& trust() { return m_trust; }
    const std::map<RouteKey, RoutingTableEntry>& routing_table() const { return m_routes; }
    const std::map<std::uint64_t, DiscoverySession>& sessions() const { return m_sessions; }
    const ServerRecords* server_records() const {
        return m_server_records ? m_server_records.get() : nullptr;
    }
    const Watchdog* watchdog() const { return m_watchdog ? m_watchdog.get() : nullptr; }
    Watchdog* watchdog() { return m_watchdog ? m_watchdog.get() : nullptr; }
    const KeyToken& token() const { return m_token; }
    const std::vector<std::pair<Position, AuthCode>>& reported_history() const {
        return m_reported_history;
    }
    std::optional<PseudoId> pseudo_for_request(std::uint64_t request_id) const {
        auto it = m_request_pseudo.find(request_id);
        if (it == m_request_pseudo.end()) return std::nullopt;
        return it->second;
    }

    bool is_server() const { return m_server_records != nullptr; }
    void make_server();

    void set_adversary(const AdversaryProfile* p) { m_adversary = p; }
    const AdversaryProfile* adversary() const { return m_adversary; }

    /// Periodic beacon + position-update duties.
    void send_beacon();
    void maybe_update_position();

  private:
    // message handlers
    void on_beacon(const Message& m);
    void on_rreq(const Message& m, NodeId phys_sender);
    void on_hrep(const Message& m, NodeId phys_sender);
    void on_cnfm(const Message& m, NodeId phys_sender);
    void on_ack(const Message& m, NodeId phys_sender);
    void on_rrep(const Message& m, NodeId phys_sender);
    void on_hello_m1(const Message& m);
    void on_reply_m2(const Message& m);
    void on_trust_request(const Message& m, NodeId phys_sender);
    void on_trust_response(const Message& m, Channel ch);
    void on_pos_update(const Message& m);
    void on_pos_request(const Message& m, NodeId phys_sender);
    void on_pos_reply(const Message& m);
    void on_mobility_alert(const Message& m, Channel ch);
    void on_sybil_probe(const Message& m);
    void on_sybil_probe_reply(const Message& m);
    void on_data(const Message& m, NodeId phys_sender);
    void on_validation_request(const Message& m, NodeId requester);

    // discovery internals
    void launch_attempt(std::uint64_t request_id);
    void broadcast_rreq(HopSearch& hs);
    void hop_retry(HopSearch& hs, const char* cause);
    void accept_winner(HopSearch& hs);
    void close_session(std::uint64_t request_id);
    void begin_discovery(FlowState& flow);
    void send_pos_request(DiscoverySession& s);
    void join_contention(const RreqPayload& rreq, NodeId phys_sender, bool is_dest);
    void originate_rrep(const RreqPayload& rreq, int attempt);
    void forward_rrep(RrepPayload rrep, NodeId from_link);
    void flush_flow(FlowState& flow);
    void send_data_packet(FlowState& flow, std::uint64_t seq);
    PseudoId request_pseudo(std::uint64_t request_id);
    AuthCode code_for_position(const Position& p) const;
    bool position_matches_history(const Position& p) const;

    // server internals
    void server_validate(const HrepPayload& hrep, NodeId requester);
    void server_probe_timeout(std::uint64_t probe_id);
    void server_reply_verdict(NodeId requester, std::uint64_t nonce, bool allow,
                              const char* why);

    Simulation& m_sim;
    NodeId m_id;
    KeyToken m_token;
    Certificate m_cert;

    std::uint64_t m_tusn = 0;
    NeighborTable m_neighbors;
    TrustStore m_trust;

    // VHR client
    Position m_last_reported;
    bool m_has_reported = false;
    AuthCode m_latest_code = 0;
    std::vector<std::pair<Position, AuthCode>> m_reported_history;

    // routing
    std::map<RouteKey, RoutingTableEntry> m_routes;
    std::map<RouteKey, LinkPair> m_links;
    std::map<std::uint64_t, PseudoId> m_request_pseudo;
    std::set<std::uint64_t> m_committed_requests;
    std::map<RouteKey, HopSearch> m_searches;
    std::map<RouteKey, PendingWin> m_pending_wins;
    std::map<std::uint64_t, DiscoverySession> m_sessions;
    std::map<std::uint64_t, DestDuty> m_dest_duties;
    std::map<std::uint64_t, FlowState> m_flows;

    // trust-gated rreqs awaiting a trust_response, keyed by subject
    struct GatedRreq {
        RreqPayload rreq;
        NodeId phys_sender;
        bool is_dest;
    };
    std::map<NodeId, std::vector<GatedRreq>> m_gated;
    std::map<std::uint64_t, NodeId> m_trust_nonces; // nonce -> subject

    // server role
    struct PendingProbe {
        std::uint64_t probe_id = 0;
        NodeId requester = 0;
        std::uint64_t nonce = 0;
        Position target;
        bool done = false;
    };
    std::unique_ptr<ServerRecords> m_server_records;
    std::unique_ptr<Watchdog> m_watchdog;
    std::map<std::uint64_t, PendingProbe> m_probes;

    const AdversaryProfile* m_adversary = nullptr;
};

} // namespace manet

#endif
