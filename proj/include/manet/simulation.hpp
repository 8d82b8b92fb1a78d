#ifndef MANET_SIMULATION_HPP
#define MANET_SIMULATION_HPP

#include <memory>
#include <optional>

#include "manet/config.hpp"
#include "manet/kernel.hpp"
#include "manet/metrics.hpp"
#include "manet/node.hpp"

namespace manet {

/// Owns the kernel and the node population, wires protocol callbacks,
/// drives contention rounds, and accounts metrics. One instance per
/// (config, seed); instances share nothing, so independent seeds may run
/// on different threads.
class Simulation {
  public:
    explicit Simulation(ScenarioConfig cfg, std::optional<std::uint64_t> seed_override = {});
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Runs the scenario to its configured duration and finalizes metrics.
    void run();

    const Metrics& metrics() const { return m_metrics; }
    const TraceSink& trace() const { return m_trace; }
    Kernel& kernel() { return *m_kernel; }
    const ScenarioConfig& config() const { return m_cfg; }
    std::uint64_t seed() const { return m_seed; }

    ProtocolNode& node(NodeId n) { return *m_nodes[n]; }
    const ProtocolNode& node(NodeId n) const { return *m_nodes[n]; }
    std::size_t node_count() const { return m_nodes.size(); }

    // ---- services used by ProtocolNode ----------------------------------
    SimTime now() const { return m_kernel->now(); }
    const ProtocolKnobs& knobs() const { return m_cfg.knobs; }
    VhrConfig vhr_config() const;
    VerifyConfig verify_config() const;

    std::uint64_t next_request_id() { return ++m_next_request_id; }
    std::uint64_t next_nonce() { return ++m_next_nonce; }

    /// Servers whose current position lies inside the target's VHR,
    /// ordered by distance to `from` (ties by id).
    std::vector<NodeId> servers_for(NodeId target, const Position& from) const;
    /// Server nearest to `from` (ties by id); nullopt when none exist.
    std::optional<NodeId> nearest_server(const Position& from) const;

    Digest public_part_of(NodeId n) const;
    bool verify_certificate(const Certificate& cert) const;
    Certificate issue_certificate(NodeId owner, const Digest& public_part);

    // contention rounds
    void open_contention(const RreqPayload& rreq, NodeId hop_sender);
    void join_contention_round(const RreqPayload& rreq, NodeId hop_sender, NodeId receiver,
                               int node_class, const PseudoId& pseudo, const Position& claimed);

    // watchdog observation oracle: servers inside a node's VHR see its
    // forwarding behavior
    void watchdog_observe_receive(NodeId forwarder, const PacketKey& pkt);
    void watchdog_observe_forward(NodeId forwarder, const PacketKey& pkt);
    void note_watchdog_flag(NodeId server, NodeId flagged);

    // metrics hooks
    Metrics& counters() { return m_metrics; }
    void note_candidate(NodeId source, const RouteCandidate& c);
    void note_route_selected(NodeId source, const DiscoverySession& s);
    void note_discovery_started() { ++m_metrics.discoveries_started; }
    void note_discovery_result(bool ok);
    void note_hop_established(int rounds_used);
    void note_data_offered() { ++m_metrics.data_offered; }
    void note_data_delivered() { ++m_metrics.data_delivered; }
    void note_position_service_failure() { ++m_metrics.position_service_failures; }

    /// Validation bookkeeping: the hop sender registers who (physically)
    /// sent the winning hrep so probe verdicts can be scored against
    /// ground truth.
    void register_validation(std::uint64_t nonce, NodeId claimant_link);
    void note_sybil_verdict(std::uint64_t nonce, bool denied);

    bool is_adversary_kind(NodeId n, AdversaryProfile::Kind k) const;

  private:
    struct RoundKey {
        std::uint64_t request_id;
        int attempt;
        int round;
        NodeId sender;
        bool operator<(const RoundKey& o) const;
    };

    struct Round {
        std::vector<Contender> contenders;
        std::map<NodeId, std::pair<PseudoId, Position>> details;
        SimTime join_deadline = 0;
        bool resolved = false;
    };

    void build();
    void schedule_bootstrap();
    void schedule_mobility();
    void mobility_tick();
    void resolve_contention(const RoundKey& key);
    void dispatch(NodeId receiver, const Message& m, NodeId phys_sender, Channel ch);
    void finalize_metrics();

    ScenarioConfig m_cfg;
    std::uint64_t m_seed;
    TraceSink m_trace;
    std::unique_ptr<Kernel> m_kernel;
    std::vector<std::unique_ptr<ProtocolNode>> m_nodes;
    KeyToken m_authority;
    std::vector<Digest> m_public_registry;
    Metrics m_metrics;

    std::map<RoundKey, Round> m_rounds;
    std::uint64_t m_next_request_id = 0;
    std::uint64_t m_next_nonce = 0;
    std::set<std::pair<NodeId, NodeId>> m_watchdog_flags; // (server, node)
    std::set<NodeId> m_flagged_nodes;
    std::map<std::uint64_t, NodeId> m_validation_claimant;

    std::vector<int> m_chosen_hops;
    std::vector<double> m_chosen_trust;
};

/// Convenience wrapper for the harness: build, run, hand back results.
struct ScenarioResult {
    Metrics metrics;
    std::string trace_text;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            std::optional<std::uint64_t> seed_override = {});

} // namespace manet

#endif
