#include "manet/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "manet/hash.hpp"

namespace manet {

bool Simulation::RoundKey::operator<(const RoundKey& o) const {
    if (request_id != o.request_id) return request_id < o.request_id;
    if (attempt != o.attempt) return attempt < o.attempt;
    if (round != o.round) return round < o.round;
    return sender < o.sender;
}

Simulation::Simulation(ScenarioConfig cfg, std::optional<std::uint64_t> seed_override)
    : m_cfg(std::move(cfg)),
      m_seed(seed_override.value_or(m_cfg.seed)),
      m_trace(m_cfg.trace),
      m_authority{} {
    build();
}

Simulation::~Simulation() = default;

VhrConfig Simulation::vhr_config() const {
    return VhrConfig{m_cfg.knobs.region_radius, m_cfg.knobs.update_threshold, m_cfg.field_width,
                     m_cfg.field_height};
}

VerifyConfig Simulation::verify_config() const {
    return VerifyConfig{m_cfg.range_threshold(), m_cfg.mobility.max_speed, 1};
}

void Simulation::build() {
    m_kernel = std::make_unique<Kernel>(Field{m_cfg.field_width, m_cfg.field_height},
                                        RadioModel{m_cfg.radio_range}, m_seed, &m_trace);
    m_kernel->set_service_hop_delay(static_cast<SimTime>(m_cfg.knobs.service_hop_delay_us));

    auto& rng = m_kernel->rng();
    m_authority = make_key_token(0xffffffff, rng);

    // placements: explicit where configured, uniform elsewhere (in id order)
    for (NodeId n = 0; n < m_cfg.node_count; ++n) {
        Position p;
        auto it = m_cfg.placements.find(n);
        if (it != m_cfg.placements.end()) {
            p = it->second;
        } else {
            p.x = rng.uniform_range(0.0, m_cfg.field_width);
            p.y = rng.uniform_range(0.0, m_cfg.field_height);
        }
        m_kernel->add_node(p);
    }

    // mobility state
    for (NodeId n = 0; n < m_cfg.node_count; ++n) {
        MobilityState& st = m_kernel->mobility(n);
        std::vector<ScriptedMove> script;
        for (const auto& mv : m_cfg.moves) {
            if (mv.node != n) continue;
            ScriptedMove sm;
            sm.start = seconds_to_micros(mv.start_s);
            sm.end = seconds_to_micros(mv.start_s + mv.duration_s);
            sm.vx = mv.vx;
            sm.vy = mv.vy;
            script.push_back(sm);
        }
        if (!script.empty()) {
            st.mode = MobilityState::Mode::Scripted;
            st.script = std::move(script);
        } else if (m_cfg.mobility.model == MobilitySpec::Model::Waypoint) {
            st.mode = MobilityState::Mode::Waypoint;
            st.speed_min = m_cfg.mobility.speed_min;
            st.speed_max = m_cfg.mobility.speed_max;
        }
    }

    // keys, certificates, nodes
    m_public_registry.resize(m_cfg.node_count);
    for (NodeId n = 0; n < m_cfg.node_count; ++n) {
        KeyToken tok = make_key_token(n, rng);
        m_public_registry[n] = tok.public_part;
        Certificate cert = issue_certificate(n, tok.public_part);
        m_nodes.push_back(std::make_unique<ProtocolNode>(*this, n, std::move(tok), cert));
    }

    for (NodeId s : m_cfg.servers) m_nodes[s]->make_server();

    // m_cfg is owned and immutable from here on, so these pointers are stable
    for (const auto& adv : m_cfg.adversaries) m_nodes[adv.node]->set_adversary(&adv);

    for (NodeId n = 0; n < m_cfg.node_count; ++n) {
        for (const auto& [subject, level] : m_cfg.trust_levels)
            m_nodes[n]->trust().set(subject, level);
    }

    m_kernel->set_delivery_sink([this](NodeId rx, const Message& m, NodeId from, Channel ch) {
        dispatch(rx, m, from, ch);
    });
    m_kernel->set_tx_hook([this](MessageKind kind, Channel) {
        ++m_metrics.control_overhead[kind_name(kind)];
    });

    schedule_bootstrap();
    schedule_mobility();
}

Certificate Simulation::issue_certificate(NodeId owner, const Digest& public_part) {
    ByteWriter w;
    w.u32(owner).raw(public_part.data(), public_part.size());
    Certificate cert;
    cert.owner = owner;
    cert.public_part = public_part;
    cert.signature = seal(m_authority.secret_part, w.bytes());
    return cert;
}

bool Simulation::verify_certificate(const Certificate& cert) const {
    const auto opened = open(m_authority.public_part, cert.signature);
    if (!opened) return false;
    ByteWriter w;
    w.u32(cert.owner).raw(cert.public_part.data(), cert.public_part.size());
    return *opened == w.bytes();
}

Digest Simulation::public_part_of(NodeId n) const { return m_public_registry[n]; }

void Simulation::schedule_bootstrap() {
    for (NodeId n = 0; n < m_cfg.node_count; ++n) {
        m_kernel->schedule_at(0, [this, n] { m_nodes[n]->bootstrap(); });
    }
    for (const auto& k : m_cfg.kills) {
        m_kernel->schedule_at(seconds_to_micros(k.at_s), [this, node = k.node] {
            m_kernel->kill(node);
        });
    }
    std::uint64_t flow_id = 0;
    for (const auto& f : m_cfg.flows) {
        m_kernel->schedule_at(seconds_to_micros(f.start_s), [this, f, flow_id] {
            m_nodes[f.source]->start_flow(f, flow_id);
        });
        ++flow_id;
    }
}

void Simulation::schedule_mobility() {
    const auto step = static_cast<SimTime>(m_cfg.mobility.step_ms * kMicrosPerMilli);
    if (step == 0) return;
    m_kernel->schedule_at(step, [this] { mobility_tick(); });
}

void Simulation::mobility_tick() {
    const auto step = static_cast<SimTime>(m_cfg.mobility.step_ms * kMicrosPerMilli);
    m_kernel->step_mobility(micros_to_seconds(step));
    for (NodeId n = 0; n < m_cfg.node_count; ++n) m_nodes[n]->on_mobility_tick();
    const SimTime next = m_kernel->now() + step;
    if (next <= seconds_to_micros(m_cfg.duration_s))
        m_kernel->schedule_at(next, [this] { mobility_tick(); });
}

void Simulation::dispatch(NodeId receiver, const Message& m, NodeId phys_sender, Channel ch) {
    m_nodes[receiver]->on_message(m, phys_sender, ch);
}

void Simulation::run() {
    m_kernel->run_until(seconds_to_micros(m_cfg.duration_s));
    finalize_metrics();
}

// ---------------------------------------------------------------------------
// contention rounds
// ---------------------------------------------------------------------------

void Simulation::open_contention(const RreqPayload& rreq, NodeId hop_sender) {
    const RoundKey key{rreq.request_id, rreq.attempt, rreq.round, hop_sender};
    Round round;
    const SimTime max_prop = m_kernel->radio().propagation_delay(m_kernel->radio().range);
    const SimTime gate =
        m_cfg.knobs.source_auth
            ? static_cast<SimTime>(m_cfg.knobs.trust_request_timeout_ms * kMicrosPerMilli)
            : 0;
    round.join_deadline = m_kernel->now() + max_prop + gate;
    m_rounds[key] = std::move(round);
    m_kernel->schedule_at(m_rounds[key].join_deadline, [this, key] { resolve_contention(key); });
}

void Simulation::join_contention_round(const RreqPayload& rreq, NodeId hop_sender, NodeId receiver,
                                       int node_class, const PseudoId& pseudo,
                                       const Position& claimed) {
    const RoundKey key{rreq.request_id, rreq.attempt, rreq.round, hop_sender};
    auto it = m_rounds.find(key);
    if (it == m_rounds.end() || it->second.resolved) return;
    it->second.contenders.push_back(Contender{receiver, node_class});
    it->second.details[receiver] = {pseudo, claimed};
}

void Simulation::resolve_contention(const RoundKey& key) {
    auto it = m_rounds.find(key);
    if (it == m_rounds.end()) return;
    Round round = std::move(it->second);
    m_rounds.erase(it);

    const SimTime t = m_kernel->now();
    if (round.contenders.empty()) {
        m_trace.record(t, "contention_empty", key.sender)
            .kv("req", key.request_id)
            .kv("attempt", key.attempt)
            .kv("round", key.round);
        return; // the sender's hrep timeout drives the retry
    }

    std::sort(round.contenders.begin(), round.contenders.end(),
              [](const Contender& a, const Contender& b) { return a.node < b.node; });
    const ContentionResult res =
        run_contention(round.contenders, m_cfg.contention(), m_kernel->rng());

    const auto& cc = m_cfg.contention();
    const SimTime prio_end = t + cc.slot_duration * static_cast<SimTime>(cc.n_priority_slots);
    const SimTime elim_end = prio_end + cc.slot_duration * static_cast<SimTime>(res.max_burst + 1);
    const SimTime yield_at = t + res.resolve_offset;

    m_trace.record(prio_end, "contention", key.sender)
        .kv("phase", "prio")
        .kv("req", key.request_id)
        .kv("attempt", key.attempt)
        .kv("round", key.round)
        .kv("class", res.surviving_class)
        .kv("survivors", res.prio_survivors);
    m_trace.record(elim_end, "contention", key.sender)
        .kv("phase", "elim")
        .kv("req", key.request_id)
        .kv("burst", res.max_burst)
        .kv("survivors", res.elim_survivors);

    if (res.collision) {
        ++m_metrics.hrep_collisions;
        m_trace.record(yield_at, "contention", key.sender)
            .kv("phase", "yield")
            .kv("req", key.request_id)
            .kv("outcome", "collision");
        const SimTime hear = yield_at + m_kernel->radio().propagation_delay(m_kernel->radio().range);
        m_kernel->schedule_at(hear, [this, key] {
            m_nodes[key.sender]->contention_heard_collision(key.request_id, key.attempt,
                                                            key.round);
        });
        return;
    }

    m_trace.record(yield_at, "contention", key.sender)
        .kv("phase", "yield")
        .kv("req", key.request_id)
        .kv("outcome", "winner")
        .kv("winner", std::uint64_t(res.winner))
        .kv("class", res.winner_class)
        .kv("delay", res.winner_delay);
    m_kernel->schedule_at(yield_at, [this, key, winner = res.winner] {
        m_nodes[winner]->contention_won(key.request_id, key.attempt, key.round);
    });
}

// ---------------------------------------------------------------------------
// directories and oracles
// ---------------------------------------------------------------------------

std::vector<NodeId> Simulation::servers_for(NodeId target, const Position& from) const {
    const VhrConfig vc = vhr_config();
    std::vector<NodeId> out;
    for (NodeId s : m_cfg.servers) {
        if (!m_kernel->alive(s)) continue;
        if (in_vhr_region(m_kernel->position(s), target, vc)) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
        const double da = distance(from, m_kernel->position(a));
        const double db = distance(from, m_kernel->position(b));
        if (da != db) return da < db;
        return a < b;
    });
    return out;
}

std::optional<NodeId> Simulation::nearest_server(const Position& from) const {
    std::optional<NodeId> best;
    double best_d = 0.0;
    for (NodeId s : m_cfg.servers) {
        if (!m_kernel->alive(s)) continue;
        const double d = distance(from, m_kernel->position(s));
        if (!best || d < best_d) {
            best = s;
            best_d = d;
        }
    }
    return best;
}

void Simulation::watchdog_observe_receive(NodeId forwarder, const PacketKey& pkt) {
    const VhrConfig vc = vhr_config();
    for (NodeId s : m_cfg.servers) {
        if (!m_kernel->alive(s)) continue;
        Watchdog* wd = m_nodes[s]->watchdog();
        if (!wd) continue;
        if (!in_vhr_region(m_kernel->position(s), forwarder, vc)) continue;
        const SimTime deadline = wd->observe_receive(forwarder, pkt, m_kernel->now());
        m_kernel->schedule_at(deadline, [this, s, forwarder, pkt] {
            Watchdog* w = m_nodes[s]->watchdog();
            if (!w) return;
            if (w->expire(forwarder, pkt, m_kernel->now())) {
                m_trace.record(m_kernel->now(), "watchdog_fail", s)
                    .kv("watched", std::uint64_t(forwarder))
                    .kv("failures", w->failure_rate(forwarder));
                if (w->is_misbehaving(forwarder)) note_watchdog_flag(s, forwarder);
            }
        });
    }
}

void Simulation::watchdog_observe_forward(NodeId forwarder, const PacketKey& pkt) {
    const VhrConfig vc = vhr_config();
    for (NodeId s : m_cfg.servers) {
        if (!m_kernel->alive(s)) continue;
        Watchdog* wd = m_nodes[s]->watchdog();
        if (!wd) continue;
        if (!in_vhr_region(m_kernel->position(s), forwarder, vc)) continue;
        wd->observe_forward(forwarder, pkt);
    }
}

void Simulation::note_watchdog_flag(NodeId server, NodeId flagged) {
    if (!m_watchdog_flags.insert({server, flagged}).second) return;
    m_trace.record(m_kernel->now(), "watchdog_flag", server).kv("node", std::uint64_t(flagged));
    if (m_flagged_nodes.insert(flagged).second) {
        if (is_adversary_kind(flagged, AdversaryProfile::Kind::Dropper))
            ++m_metrics.watchdog_true_positives;
        else
            ++m_metrics.watchdog_false_positives;
    }
}

bool Simulation::is_adversary_kind(NodeId n, AdversaryProfile::Kind k) const {
    for (const auto& a : m_cfg.adversaries)
        if (a.node == n && a.kind == k) return true;
    return false;
}

void Simulation::register_validation(std::uint64_t nonce, NodeId claimant_link) {
    m_validation_claimant[nonce] = claimant_link;
}

void Simulation::note_sybil_verdict(std::uint64_t nonce, bool denied) {
    auto it = m_validation_claimant.find(nonce);
    const bool known = it != m_validation_claimant.end();
    const NodeId claimant = known ? it->second : 0;
    if (!denied) return;
    if (known && is_adversary_kind(claimant, AdversaryProfile::Kind::Sybil))
        ++m_metrics.sybil_true_positives;
    else
        ++m_metrics.sybil_false_positives;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

void Simulation::note_discovery_result(bool ok) {
    if (ok) ++m_metrics.discoveries_succeeded;
}

void Simulation::note_hop_established(int rounds_used) {
    ++m_metrics.contention_rounds[rounds_used];
}

void Simulation::note_candidate(NodeId source, const RouteCandidate& c) {
    auto rec = m_trace.record(m_kernel->now(), "candidate", source);
    rec.kv("req", c.request_id)
        .kv("attempt", c.attempt)
        .kv("hops", c.hop_count)
        .kv("trust", c.trust.empty() ? std::string("-") : c.trust.str());
    if (!c.trust.empty()) rec.kv("avg", format_double(avg_trust(c.trust), 2));
}

void Simulation::note_route_selected(NodeId source, const DiscoverySession& s) {
    const RouteCandidate& c = s.candidates[static_cast<std::size_t>(s.chosen)];
    m_chosen_hops.push_back(c.hop_count);
    if (!c.trust.empty()) m_chosen_trust.push_back(avg_trust(c.trust));
    auto rec = m_trace.record(m_kernel->now(), "route_selected", source);
    rec.kv("req", s.request_id)
        .kv("attempt", c.attempt)
        .kv("hops", c.hop_count)
        .kv("candidates", std::uint64_t(s.candidates.size()))
        .kv("mode", m_cfg.mode == RouteMode::TrustedPath ? 1 : 2);
    if (!c.trust.empty()) rec.kv("avg", format_double(avg_trust(c.trust), 2));
}

void Simulation::finalize_metrics() {
    const double nan = std::nan("");
    m_metrics.delivery_ratio = m_metrics.data_offered == 0
                                   ? nan
                                   : static_cast<double>(m_metrics.data_delivered) /
                                         static_cast<double>(m_metrics.data_offered);
    m_metrics.route_discovery_success =
        m_metrics.discoveries_started == 0
            ? nan
            : static_cast<double>(m_metrics.discoveries_succeeded) /
                  static_cast<double>(m_metrics.discoveries_started);
    if (m_chosen_hops.empty()) {
        m_metrics.mean_hops = nan;
    } else {
        double sum = 0;
        for (int h : m_chosen_hops) sum += h;
        m_metrics.mean_hops = sum / static_cast<double>(m_chosen_hops.size());
    }
    if (m_chosen_trust.empty()) {
        m_metrics.chosen_path_avg_trust = nan;
    } else {
        double sum = 0;
        for (double t : m_chosen_trust) sum += t;
        m_metrics.chosen_path_avg_trust = sum / static_cast<double>(m_chosen_trust.size());
    }
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::optional<std::uint64_t> seed_override) {
    Simulation sim(cfg, seed_override);
    sim.run();
    return ScenarioResult{sim.metrics(), sim.trace().text()};
}

} // namespace manet
