#ifndef MANET_KERNEL_HPP
#define MANET_KERNEL_HPP

#include <functional>
#include <vector>

#include "manet/core.hpp"
#include "manet/event_queue.hpp"
#include "manet/messages.hpp"
#include "manet/mobility.hpp"
#include "manet/radio.hpp"
#include "manet/rng.hpp"
#include "manet/trace.hpp"

namespace manet {

/// Delivery channel: Radio is the contended unit-disk medium; Service is
/// the idealized multi-hop plane carrying position-service and validation
/// traffic to servers (the paper never says how control traffic reaches a
/// distant server, so that leg is modeled, not simulated hop by hop).
enum class Channel { Radio, Service };

/// Deterministic simulation kernel: event clock, node positions and
/// mobility, unit-disk delivery, seeded randomness, trace emission.
/// Protocol modules run as passive state machines driven by its events.
class Kernel {
  public:
    using DeliverFn =
        std::function<void(NodeId receiver, const Message&, NodeId phys_sender, Channel)>;
    using TxHook = std::function<void(MessageKind, Channel)>;

    Kernel(Field field, RadioModel radio, std::uint64_t seed, TraceSink* trace);

    NodeId add_node(Position p);
    std::size_t node_count() const { return m_nodes.size(); }

    SimTime now() const { return m_queue.now(); }
    void schedule_at(SimTime t, EventQueue::Handler fn) { m_queue.schedule_at(t, std::move(fn)); }
    void schedule_in(SimTime dt, EventQueue::Handler fn) { m_queue.schedule_in(dt, std::move(fn)); }
    void run_until(SimTime t_end) { m_queue.run_until(t_end); }

    Rng& rng() { return m_rng; }
    TraceSink& trace() { return *m_trace; }
    const Field& field() const { return m_field; }
    const RadioModel& radio() const { return m_radio; }

    const Position& position(NodeId n) const { return m_nodes[n].pos; }
    void set_position(NodeId n, Position p) { m_nodes[n].pos = p; }
    bool alive(NodeId n) const { return m_nodes[n].alive; }
    void kill(NodeId n);
    MobilityState& mobility(NodeId n) { return m_nodes[n].mobility; }

    void set_delivery_sink(DeliverFn fn) { m_deliver = std::move(fn); }
    void set_tx_hook(TxHook fn) { m_tx_hook = std::move(fn); }
    void set_service_hop_delay(SimTime us) { m_service_hop_delay = us; }

    /// Unit-disk broadcast: delivery to every other live node within r at
    /// transmit time, delayed by propagation.
    void broadcast(NodeId sender, const Message& m);

    /// Single-target delivery under the same rule; out-of-range sends are
    /// silently lost (traced).
    void unicast(NodeId sender, NodeId dest, const Message& m);

    /// Idealized control-plane delivery to a specific node. Latency models
    /// a multi-hop relay: ceil(distance/r) hops at a fixed per-hop delay.
    void service_send(NodeId sender, NodeId dest, const Message& m);

    /// Control-plane delivery addressed to a location: handed to every live
    /// node within `tolerance` of the target position at arrival time.
    void service_send_to_position(NodeId sender, Position target, double tolerance,
                                  const Message& m);

    /// Advance all node positions by dt seconds.
    void step_mobility(double dt);

    /// Brute-force speed check support: positions snapshot.
    std::vector<Position> positions_snapshot() const;

  private:
    struct NodeState {
        Position pos;
        bool alive = true;
        MobilityState mobility;
    };

    void deliver_later(SimTime delay, NodeId receiver, Message m, NodeId phys_sender, Channel ch);
    SimTime service_delay(double dist) const;

    Field m_field;
    RadioModel m_radio;
    EventQueue m_queue;
    Rng m_rng;
    TraceSink* m_trace;
    std::vector<NodeState> m_nodes;
    DeliverFn m_deliver;
    TxHook m_tx_hook;
    SimTime m_service_hop_delay = 200;
};

} // namespace manet

#endif
