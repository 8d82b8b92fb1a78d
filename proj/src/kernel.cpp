#include "manet/kernel.hpp"

namespace manet {

Kernel::Kernel(Field field, RadioModel radio, std::uint64_t seed, TraceSink* trace)
    : m_field(field), m_radio(radio), m_rng(seed), m_trace(trace) {}

NodeId Kernel::add_node(Position p) {
    m_nodes.push_back(NodeState{p, true, {}});
    return static_cast<NodeId>(m_nodes.size() - 1);
}

void Kernel::kill(NodeId n) {
    m_nodes[n].alive = false;
    m_trace->record(now(), "kill", n);
}

void Kernel::deliver_later(SimTime delay, NodeId receiver, Message m, NodeId phys_sender,
                           Channel ch) {
    m_queue.schedule_in(delay, [this, receiver, msg = std::move(m), phys_sender, ch]() {
        if (!m_nodes[receiver].alive) return;
        if (m_deliver) m_deliver(receiver, msg, phys_sender, ch);
    });
}

void Kernel::broadcast(NodeId sender, const Message& m) {
    if (!m_nodes[sender].alive) return;
    if (m_tx_hook) m_tx_hook(m.kind, Channel::Radio);
    const Position from = m_nodes[sender].pos;
    // membership evaluated at transmit time
    for (NodeId v = 0; v < m_nodes.size(); ++v) {
        if (v == sender || !m_nodes[v].alive) continue;
        const double d = distance(from, m_nodes[v].pos);
        if (m_radio.in_range(d)) deliver_later(m_radio.propagation_delay(d), v, m, sender, Channel::Radio);
    }
}

void Kernel::unicast(NodeId sender, NodeId dest, const Message& m) {
    if (!m_nodes[sender].alive) return;
    if (m_tx_hook) m_tx_hook(m.kind, Channel::Radio);
    if (!m_nodes[dest].alive) {
        m_trace->record(now(), "unicast_lost", sender).kv("to", std::uint64_t(dest)).kv("kind", kind_name(m.kind)).kv("cause", "dead");
        return;
    }
    const double d = distance(m_nodes[sender].pos, m_nodes[dest].pos);
    if (!m_radio.in_range(d)) {
        m_trace->record(now(), "unicast_lost", sender).kv("to", std::uint64_t(dest)).kv("kind", kind_name(m.kind)).kv("cause", "range").kv("dist", d);
        return;
    }
    deliver_later(m_radio.propagation_delay(d), dest, m, sender, Channel::Radio);
}

SimTime Kernel::service_delay(double dist) const {
    double hops = std::ceil(dist / m_radio.range);
    if (hops < 1.0) hops = 1.0;
    return static_cast<SimTime>(hops) * m_service_hop_delay;
}

void Kernel::service_send(NodeId sender, NodeId dest, const Message& m) {
    if (!m_nodes[sender].alive) return;
    if (m_tx_hook) m_tx_hook(m.kind, Channel::Service);
    const double d = distance(m_nodes[sender].pos, m_nodes[dest].pos);
    deliver_later(service_delay(d), dest, m, sender, Channel::Service);
}

void Kernel::service_send_to_position(NodeId sender, Position target, double tolerance,
                                      const Message& m) {
    if (!m_nodes[sender].alive) return;
    if (m_tx_hook) m_tx_hook(m.kind, Channel::Service);
    const double d = distance(m_nodes[sender].pos, target);
    const SimTime delay = service_delay(d);
    // membership at arrival time: the probed spot may have emptied meanwhile
    m_queue.schedule_in(delay, [this, target, tolerance, msg = m, sender]() {
        for (NodeId v = 0; v < m_nodes.size(); ++v) {
            if (v == sender || !m_nodes[v].alive) continue;
            if (distance(m_nodes[v].pos, target) <= tolerance) {
                if (m_deliver) m_deliver(v, msg, sender, Channel::Service);
            }
        }
    });
}

void Kernel::step_mobility(double dt) {
    for (NodeId n = 0; n < m_nodes.size(); ++n) {
        if (!m_nodes[n].alive) continue;
        step_node_mobility(m_nodes[n].pos, m_nodes[n].mobility, dt, now(), m_field, m_rng);
    }
}

std::vector<Position> Kernel::positions_snapshot() const {
    std::vector<Position> out;
    out.reserve(m_nodes.size());
    for (const auto& n : m_nodes) out.push_back(n.pos);
    return out;
}

} // namespace manet
