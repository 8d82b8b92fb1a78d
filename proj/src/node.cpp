#include "manet/node.hpp"

#include <algorithm>
#include <cmath>

#include "manet/hash.hpp"
#include "manet/simulation.hpp"

namespace manet {
namespace {

constexpr SimTime kAckTimeout = 10 * kMicrosPerMilli;

std::vector<std::uint8_t> encode_code(AuthCode code) {
    ByteWriter w;
    w.u64(code);
    return w.bytes();
}

std::uint64_t validation_nonce_for(std::uint64_t request_id, int attempt) {
    return request_id * 1000 + static_cast<std::uint64_t>(attempt);
}

} // namespace

ProtocolNode::ProtocolNode(Simulation& sim, NodeId id, KeyToken token, Certificate cert)
    : m_sim(sim), m_id(id), m_token(std::move(token)), m_cert(std::move(cert)) {}

void ProtocolNode::make_server() {
    m_server_records = std::make_unique<ServerRecords>();
    const auto& k = m_sim.knobs();
    m_watchdog = std::make_unique<Watchdog>(
        static_cast<SimTime>(k.watchdog_timeout_ms * kMicrosPerMilli), k.watchdog_flag_threshold);
}

// ---------------------------------------------------------------------------
// bootstrap and periodic duties
// ---------------------------------------------------------------------------

void ProtocolNode::bootstrap() {
    auto& kern = m_sim.kernel();
    const auto& knobs = m_sim.knobs();

    // initial position report, small jitter so updates do not collide
    const SimTime pos_jitter = kern.rng().uniform_u64(50 * kMicrosPerMilli);
    kern.schedule_in(pos_jitter, [this] { maybe_update_position(); });

    if (knobs.beacons && knobs.beacon_interval_ms > 0) {
        const auto interval = static_cast<SimTime>(knobs.beacon_interval_ms * kMicrosPerMilli);
        const SimTime first = kern.rng().uniform_u64(interval);
        kern.schedule_in(first, [this] { send_beacon(); });
    }

    if (knobs.handshake) {
        const SimTime hs_at = 50 * kMicrosPerMilli + kern.rng().uniform_u64(50 * kMicrosPerMilli);
        kern.schedule_in(hs_at, [this] {
            auto& k = m_sim.kernel();
            Message m = make_message(MessageKind::HelloM1, k.now(), SenderHandle::real(m_id),
                                     HelloM1Payload{m_id, m_cert, k.position(m_id)});
            k.broadcast(m_id, m);
        });
    }
}

void ProtocolNode::send_beacon() {
    auto& kern = m_sim.kernel();
    if (!kern.alive(m_id)) return;
    const auto& knobs = m_sim.knobs();

    Position claim = kern.position(m_id);
    if (m_adversary && m_adversary->kind == AdversaryProfile::Kind::Sybil)
        claim = m_adversary->claimed_pos;

    ++m_tusn;
    Message m = make_message(MessageKind::Beacon, kern.now(), SenderHandle::real(m_id),
                             BeaconPayload{m_id, claim, m_tusn});
    kern.broadcast(m_id, m);

    const auto interval = static_cast<SimTime>(knobs.beacon_interval_ms * kMicrosPerMilli);
    kern.schedule_in(interval, [this] { send_beacon(); });
}

void ProtocolNode::maybe_update_position() {
    auto& kern = m_sim.kernel();
    if (!kern.alive(m_id)) return;
    const Position pos = kern.position(m_id);
    const double threshold = m_sim.knobs().update_threshold;

    if (m_has_reported && distance(pos, m_last_reported) <= threshold) return;

    m_last_reported = pos;
    m_has_reported = true;
    m_latest_code = kern.rng().next_u64();
    m_reported_history.emplace_back(pos, m_latest_code);

    const auto servers = m_sim.servers_for(m_id, pos);
    kern.trace().record(kern.now(), "pos_update", m_id).kv("pos", pos).kv("servers",
                                                                          std::uint64_t(servers.size()));
    if (servers.empty()) {
        m_sim.note_position_service_failure();
        kern.trace().record(kern.now(), "pos_fail", m_id).kv("cause", "no_server_in_region");
        return;
    }
    for (NodeId s : servers) {
        Message m = make_message(MessageKind::PosUpdate, kern.now(), SenderHandle::real(m_id),
                                 PosUpdatePayload{m_id, pos, kern.now(), m_latest_code});
        kern.service_send(m_id, s, m);
    }
}

void ProtocolNode::on_mobility_tick() {
    auto& kern = m_sim.kernel();
    if (!kern.alive(m_id)) return;

    maybe_update_position();

    // destination mobility: keep the reverse paths and the VHR informed
    if (!m_sim.knobs().mobility_alerts) return;
    const Position pos = kern.position(m_id);
    const double threshold = m_sim.config().alert_threshold();
    for (auto& [req, duty] : m_dest_duties) {
        if (duty.answered == 0) continue;
        if (distance(pos, duty.last_alert_pos) <= threshold) continue;
        duty.last_alert_pos = pos;
        m_reported_history.emplace_back(pos, m_latest_code);
        kern.trace().record(kern.now(), "alert_tx", m_id).kv("req", req).kv("pos", pos);
        for (int att : duty.attempts) {
            const RouteKey key{req, att};
            auto lk = m_links.find(key);
            if (lk == m_links.end() || !lk->second.has_prev) continue;
            Message m = make_message(MessageKind::MobilityAlert, kern.now(),
                                     SenderHandle::anonymous(request_pseudo(req)),
                                     MobilityAlertPayload{req, att, m_id, pos, kern.now()});
            kern.unicast(m_id, lk->second.prev_link, m);
        }
        for (NodeId s : m_sim.servers_for(m_id, pos)) {
            Message m = make_message(MessageKind::MobilityAlert, kern.now(),
                                     SenderHandle::real(m_id),
                                     MobilityAlertPayload{req, 0, m_id, pos, kern.now()});
            kern.service_send(m_id, s, m);
        }
    }
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

void ProtocolNode::on_message(const Message& m, NodeId phys_sender, Channel ch) {
    switch (m.kind) {
        case MessageKind::Beacon: on_beacon(m); return;
        case MessageKind::Rreq: on_rreq(m, phys_sender); return;
        case MessageKind::Hrep:
            if (ch == Channel::Service) on_validation_request(m, phys_sender);
            else on_hrep(m, phys_sender);
            return;
        case MessageKind::Cnfm: on_cnfm(m, phys_sender); return;
        case MessageKind::Ack: on_ack(m, phys_sender); return;
        case MessageKind::Rrep: on_rrep(m, phys_sender); return;
        case MessageKind::HelloM1: on_hello_m1(m); return;
        case MessageKind::ReplyM2: on_reply_m2(m); return;
        case MessageKind::TrustRequest: on_trust_request(m, phys_sender); return;
        case MessageKind::TrustResponse: on_trust_response(m, ch); return;
        case MessageKind::PosUpdate: on_pos_update(m); return;
        case MessageKind::PosRequest: on_pos_request(m, phys_sender); return;
        case MessageKind::PosReply: on_pos_reply(m); return;
        case MessageKind::MobilityAlert: on_mobility_alert(m, ch); return;
        case MessageKind::SybilProbe: on_sybil_probe(m); return;
        case MessageKind::SybilProbeReply: on_sybil_probe_reply(m); return;
        case MessageKind::Data: on_data(m, phys_sender); return;
    }
}

// ---------------------------------------------------------------------------
// neighbor security
// ---------------------------------------------------------------------------

void ProtocolNode::on_beacon(const Message& m) {
    auto& kern = m_sim.kernel();
    const auto& b = payload_as<BeaconPayload>(m);
    const VerifyConfig vc = m_sim.verify_config();

    const bool known = m_neighbors.count(b.sender) != 0;
    const BeaconVerdict v = process_beacon(m_neighbors, kern.position(m_id), b, kern.now(), vc);
    if (v == BeaconVerdict::AcceptedNew && !known) {
        m_neighbors[b.sender].trust_value =
            m_trust.level_or(b.sender, m_sim.knobs().default_unknown_trust);
    }
    if (!beacon_accepted(v)) {
        kern.trace()
            .record(kern.now(), "beacon_reject", m_id)
            .kv("from", std::uint64_t(b.sender))
            .kv("cause", v == BeaconVerdict::RejectedRange ? "range" : "mobility");
    }
}

void ProtocolNode::on_hello_m1(const Message& m) {
    auto& kern = m_sim.kernel();
    const auto& h = payload_as<HelloM1Payload>(m);
    if (!m_sim.verify_certificate(h.cert)) return; // no reply on bad certs

    const auto delay =
        static_cast<SimTime>(m_sim.knobs().m2_processing_delay_us);
    const SimTime m1_sent = m.sent_at;
    const NodeId target = h.sender;
    kern.schedule_in(delay, [this, target, m1_sent] {
        auto& k = m_sim.kernel();
        if (!k.alive(m_id)) return;
        Position pos = k.position(m_id);
        if (m_adversary && m_adversary->kind == AdversaryProfile::Kind::Sybil)
            pos = m_adversary->claimed_pos;
        Message reply = make_message(MessageKind::ReplyM2, k.now(), SenderHandle::real(m_id),
                                     ReplyM2Payload{m_id, target, m_cert, pos, m1_sent});
        k.unicast(m_id, target, reply);
    });
}

void ProtocolNode::on_reply_m2(const Message& m) {
    auto& kern = m_sim.kernel();
    const auto& r = payload_as<ReplyM2Payload>(m);
    if (r.to != m_id) return;
    if (!m_sim.verify_certificate(r.cert)) return;

    const SimTime t0 = r.m1_sent_at;
    const SimTime t1 = kern.now();
    const double bound = handshake_distance_bound(t0, t1);
    const double claimed = distance(kern.position(m_id), r.pos);

    if (claimed <= bound) {
        const bool fresh = m_neighbors.count(r.sender) == 0;
        NeighborEntry& e = m_neighbors[r.sender];
        e.id = r.sender;
        e.position = r.pos;
        e.has_position = true;
        e.last_beacon_time = t1;
        e.public_key = r.cert.public_part;
        e.has_key = true;
        if (fresh)
            e.trust_value = m_trust.level_or(r.sender, m_sim.knobs().default_unknown_trust);
        kern.trace()
            .record(t1, "handshake_accept", m_id)
            .kv("peer", std::uint64_t(r.sender))
            .kv("claimed", claimed)
            .kv("bound", bound);
    } else {
        // bound violated: suspected wormhole or falsified position
        kern.trace()
            .record(t1, "handshake_reject", m_id)
            .kv("peer", std::uint64_t(r.sender))
            .kv("claimed", claimed)
            .kv("bound", bound);
    }
}

// ---------------------------------------------------------------------------
// VHR position service
// ---------------------------------------------------------------------------

void ProtocolNode::on_pos_update(const Message& m) {
    if (!m_server_records) return;
    auto& kern = m_sim.kernel();
    const auto& u = payload_as<PosUpdatePayload>(m);
    // record-region rule: hold records only for nodes whose VHR contains us
    if (!in_vhr_region(kern.position(m_id), u.node, m_sim.vhr_config())) {
        kern.trace().record(kern.now(), "pos_update_refused", m_id).kv("for", std::uint64_t(u.node));
        return;
    }
    m_server_records->apply_update(u);
}

void ProtocolNode::on_pos_request(const Message& m, NodeId phys_sender) {
    if (!m_server_records) return;
    auto& kern = m_sim.kernel();
    const auto& q = payload_as<PosRequestPayload>(m);
    PosReplyPayload rep;
    rep.server = m_id;
    rep.target = q.target;
    rep.query_id = q.query_id;
    if (auto rec = m_server_records->lookup(q.target)) {
        rep.found = true;
        rep.pos = rec->pos;
        rep.update_time = rec->update_time;
        rep.code = rec->auth_code;
    }
    (void)phys_sender;
    Message out = make_message(MessageKind::PosReply, kern.now(), SenderHandle::real(m_id), rep);
    kern.service_send(m_id, q.requester, out);
}

void ProtocolNode::send_pos_request(DiscoverySession& s) {
    auto& kern = m_sim.kernel();
    if (s.pos_servers_left.empty()) {
        m_sim.note_position_service_failure();
        kern.trace().record(kern.now(), "pos_fail", m_id).kv("target", std::uint64_t(s.dest_node));
        close_session(s.request_id);
        return;
    }
    const NodeId server = s.pos_servers_left.front();
    s.pos_servers_left.erase(s.pos_servers_left.begin());
    s.pos_query_id = m_sim.next_nonce();
    Message m = make_message(MessageKind::PosRequest, kern.now(), SenderHandle::real(m_id),
                             PosRequestPayload{m_id, s.dest_node, s.pos_query_id});
    kern.service_send(m_id, server, m);

    const auto timeout = static_cast<SimTime>(m_sim.knobs().pos_reply_timeout_ms * kMicrosPerMilli);
    const std::uint64_t req = s.request_id;
    const std::uint64_t qid = s.pos_query_id;
    kern.schedule_in(timeout, [this, req, qid] {
        auto it = m_sessions.find(req);
        if (it == m_sessions.end() || it->second.closed) return;
        if (it->second.have_position || it->second.pos_query_id != qid) return;
        send_pos_request(it->second); // server silent; fall back to the next
    });
}

void ProtocolNode::on_pos_reply(const Message& m) {
    const auto& rep = payload_as<PosReplyPayload>(m);
    for (auto& [req, s] : m_sessions) {
        if (s.pos_query_id != rep.query_id || s.closed || s.have_position) continue;
        auto& kern = m_sim.kernel();
        if (!rep.found) {
            kern.trace()
                .record(kern.now(), "pos_reply_negative", m_id)
                .kv("target", std::uint64_t(rep.target));
            send_pos_request(s);
            return;
        }
        s.have_position = true;
        s.dest_pos = rep.pos;
        s.expected_code = rep.code;
        kern.trace()
            .record(kern.now(), "pos_reply", m_id)
            .kv("target", std::uint64_t(rep.target))
            .kv("pos", rep.pos)
            .kv("age_us", kern.now() - rep.update_time);

        const auto window =
            static_cast<SimTime>(m_sim.knobs().wait_window_ms * kMicrosPerMilli);
        s.window_deadline = kern.now() + window;
        kern.schedule_at(s.window_deadline, [this, id = req] { close_session(id); });
        launch_attempt(req);
        return;
    }
}

// ---------------------------------------------------------------------------
// discovery: source side
// ---------------------------------------------------------------------------

void ProtocolNode::start_flow(const FlowSpec& spec, std::uint64_t flow_id) {
    FlowState flow;
    flow.flow_id = flow_id;
    flow.dest = spec.dest;
    flow.packets = spec.packets;
    flow.interval = static_cast<SimTime>(spec.interval_ms * kMicrosPerMilli);
    flow.data_start = seconds_to_micros(spec.data_start_s);
    m_flows[flow_id] = flow;
    begin_discovery(m_flows[flow_id]);
}

void ProtocolNode::begin_discovery(FlowState& flow) {
    auto& kern = m_sim.kernel();
    DiscoverySession s;
    s.request_id = m_sim.next_request_id();
    s.flow_id = flow.flow_id;
    s.dest_node = flow.dest;
    s.started_at = kern.now();
    s.pos_servers_left = m_sim.servers_for(flow.dest, kern.position(m_id));

    flow.discovering = true;
    flow.route_ready = false;
    flow.route_stale = false;
    flow.request_id = s.request_id;

    m_sim.note_discovery_started();
    kern.trace()
        .record(kern.now(), "discovery_start", m_id)
        .kv("req", s.request_id)
        .kv("dest", std::uint64_t(flow.dest));

    m_sessions[s.request_id] = s;
    send_pos_request(m_sessions[s.request_id]);
}

void ProtocolNode::launch_attempt(std::uint64_t request_id) {
    auto it = m_sessions.find(request_id);
    if (it == m_sessions.end()) return;
    DiscoverySession& s = it->second;
    const auto& knobs = m_sim.knobs();
    if (s.closed || !s.have_position) return;
    if (static_cast<int>(s.candidates.size()) >= knobs.max_candidates) return;
    if (s.attempts_launched >= knobs.max_attempts) return;

    const int attempt = ++s.attempts_launched;
    HopSearch hs;
    hs.request_id = request_id;
    hs.attempt = attempt;
    hs.round = 0;
    hs.dest_pos = s.dest_pos;
    hs.hop_count = 0;
    m_searches[{request_id, attempt}] = hs;
    broadcast_rreq(m_searches[{request_id, attempt}]);

    // cadence: next wave after a fraction of the wait window
    const auto period = static_cast<SimTime>(knobs.wait_window_ms * kMicrosPerMilli /
                                             static_cast<double>(knobs.max_attempts));
    m_sim.kernel().schedule_in(period, [this, request_id] { launch_attempt(request_id); });
}

void ProtocolNode::broadcast_rreq(HopSearch& hs) {
    auto& kern = m_sim.kernel();
    if (!kern.alive(m_id)) return;
    const auto& knobs = m_sim.knobs();

    Position base = kern.position(m_id);
    if (m_adversary && m_adversary->kind == AdversaryProfile::Kind::Sybil)
        base = m_adversary->claimed_pos; // keeps lying about where it is

    RreqPayload rreq;
    rreq.request_id = hs.request_id;
    rreq.attempt = hs.attempt;
    rreq.round = hs.round;
    rreq.dest_pos = hs.dest_pos;
    rreq.sender_to_dest = distance(base, hs.dest_pos);
    rreq.sender_pseudo = request_pseudo(hs.request_id);
    rreq.hop_count = hs.hop_count;
    rreq.excluded = hs.excluded;
    if (knobs.source_auth) {
        rreq.carries_real_id = true;
        rreq.real_sender = m_id;
        rreq.sender_pos = base;
        rreq.sender_tusn = m_tusn;
    }

    hs.awaiting_hrep = true;
    hs.awaiting_validation = false;

    kern.trace()
        .record(kern.now(), "rreq_tx", m_id)
        .kv("req", hs.request_id)
        .kv("attempt", hs.attempt)
        .kv("round", hs.round)
        .kv("l", rreq.sender_to_dest)
        .kv("hops", hs.hop_count);

    Message m = make_message(MessageKind::Rreq, kern.now(),
                             SenderHandle::anonymous(rreq.sender_pseudo), rreq);
    kern.broadcast(m_id, m);
    m_sim.open_contention(rreq, m_id);

    // no hrep by the end of the worst-case contention window -> retry
    const SimTime max_prop = kern.radio().propagation_delay(kern.radio().range);
    const SimTime gate = knobs.source_auth
                             ? static_cast<SimTime>(knobs.trust_request_timeout_ms * kMicrosPerMilli)
                             : 0;
    const SimTime worst = static_cast<SimTime>(knobs.slot_us) *
                          static_cast<SimTime>(knobs.prio_slots + knobs.elim_slots + 1 +
                                               knobs.yield_slots + 1);
    const SimTime deadline = kern.now() + max_prop + gate + worst + max_prop + 10;
    const std::uint64_t req = hs.request_id;
    const int att = hs.attempt;
    const int round = hs.round;
    kern.schedule_at(deadline, [this, req, att, round] {
        auto it = m_searches.find({req, att});
        if (it == m_searches.end()) return;
        if (it->second.round != round || !it->second.awaiting_hrep) return;
        hop_retry(it->second, "no_hrep");
    });
}

void ProtocolNode::hop_retry(HopSearch& hs, const char* cause) {
    auto& kern = m_sim.kernel();
    if (hs.round + 1 > m_sim.knobs().retry_budget) {
        kern.trace()
            .record(kern.now(), "dead_end", m_id)
            .kv("req", hs.request_id)
            .kv("attempt", hs.attempt)
            .kv("cause", cause);
        ++m_sim.counters().dead_ends;
        m_searches.erase({hs.request_id, hs.attempt});
        return;
    }
    hs.round += 1;
    kern.trace()
        .record(kern.now(), "rreq_retry", m_id)
        .kv("req", hs.request_id)
        .kv("attempt", hs.attempt)
        .kv("round", hs.round)
        .kv("cause", cause);
    broadcast_rreq(hs);
}

void ProtocolNode::contention_heard_collision(std::uint64_t request_id, int attempt, int round) {
    auto it = m_searches.find({request_id, attempt});
    if (it == m_searches.end()) return;
    if (it->second.round != round || !it->second.awaiting_hrep) return;
    it->second.awaiting_hrep = false;
    hop_retry(it->second, "hrep_collision");
}

void ProtocolNode::on_hrep(const Message& m, NodeId phys_sender) {
    const auto& h = payload_as<HrepPayload>(m);
    auto it = m_searches.find({h.request_id, h.attempt});
    if (it == m_searches.end()) return;
    HopSearch& hs = it->second;
    if (hs.round != h.round || !hs.awaiting_hrep) return;

    auto& kern = m_sim.kernel();
    hs.awaiting_hrep = false;
    hs.pending_hrep = h;
    hs.pending_winner_link = phys_sender;

    const auto& knobs = m_sim.knobs();
    if (knobs.pathselector || knobs.sybil_check) {
        const auto server = m_sim.nearest_server(kern.position(m_id));
        if (server) {
            hs.awaiting_validation = true;
            hs.validation_nonce = validation_nonce_for(h.request_id, h.attempt);
            m_sim.register_validation(hs.validation_nonce, phys_sender);
            kern.trace()
                .record(kern.now(), "validation_request", m_id)
                .kv("req", h.request_id)
                .kv("attempt", h.attempt)
                .kv("server", std::uint64_t(*server))
                .kv("claimed", h.claimed_pos);
            Message fwd = make_message(MessageKind::Hrep, kern.now(),
                                       SenderHandle::real(m_id), h);
            kern.service_send(m_id, *server, fwd);
            return;
        }
        kern.trace().record(kern.now(), "validation_skipped", m_id).kv("cause", "no_server");
    }
    accept_winner(hs);
}

void ProtocolNode::on_trust_response(const Message& m, Channel ch) {
    const auto& r = payload_as<TrustResponsePayload>(m);
    auto& kern = m_sim.kernel();

    if (ch == Channel::Service) {
        // server verdict on a forwarded hrep
        const std::uint64_t req = r.nonce / 1000;
        const int att = static_cast<int>(r.nonce % 1000);
        auto it = m_searches.find({req, att});
        if (it == m_searches.end()) return;
        HopSearch& hs = it->second;
        if (!hs.awaiting_validation || hs.validation_nonce != r.nonce) return;
        hs.awaiting_validation = false;
        kern.trace()
            .record(kern.now(), "validation_verdict", m_id)
            .kv("req", req)
            .kv("attempt", att)
            .kv("allow", r.verdict ? 1 : 0);
        if (r.verdict) {
            accept_winner(hs);
        } else {
            // ignore this hrep and look for the next best choice
            hs.excluded.push_back(hs.pending_hrep.receiver_pseudo);
            hop_retry(hs, "denied");
        }
        return;
    }

    // radio: response to our trust_request during source authentication
    auto nit = m_trust_nonces.find(r.nonce);
    if (nit == m_trust_nonces.end()) return;
    const NodeId subject = nit->second;
    m_trust_nonces.erase(nit);
    auto git = m_gated.find(subject);
    if (git == m_gated.end()) return;
    std::vector<GatedRreq> gated = std::move(git->second);
    m_gated.erase(git);
    if (!r.verdict) {
        kern.trace().record(kern.now(), "trust_drop", m_id).kv("subject", std::uint64_t(subject)).kv(
            "cause", "refused");
        return;
    }
    m_trust.set(subject, m_sim.knobs().trust_floor);
    kern.trace().record(kern.now(), "trust_grant", m_id).kv("subject", std::uint64_t(subject));
    for (auto& g : gated) join_contention(g.rreq, g.phys_sender, g.is_dest);
}

void ProtocolNode::accept_winner(HopSearch& hs) {
    auto& kern = m_sim.kernel();
    CnfmPayload c;
    c.request_id = hs.request_id;
    c.attempt = hs.attempt;
    c.winner_pseudo = hs.pending_hrep.receiver_pseudo;
    c.sender_pseudo = request_pseudo(hs.request_id);
    Message m = make_message(MessageKind::Cnfm, kern.now(),
                             SenderHandle::anonymous(c.sender_pseudo), c);
    kern.unicast(m_id, hs.pending_winner_link, m);

    const std::uint64_t req = hs.request_id;
    const int att = hs.attempt;
    const int round = hs.round;
    kern.schedule_in(kAckTimeout, [this, req, att, round] {
        auto it = m_searches.find({req, att});
        if (it == m_searches.end()) return;
        if (it->second.round != round) return;
        hop_retry(it->second, "ack_timeout");
    });
}

void ProtocolNode::on_ack(const Message& m, NodeId phys_sender) {
    const auto& a = payload_as<AckPayload>(m);
    auto it = m_searches.find({a.request_id, a.attempt});
    if (it == m_searches.end()) return;
    HopSearch& hs = it->second;
    if (!(a.winner_pseudo == hs.pending_hrep.receiver_pseudo)) return;

    auto& kern = m_sim.kernel();
    const RouteKey key{a.request_id, a.attempt};
    RoutingTableEntry& e = m_routes[key];
    e.next_pseudo = hs.pending_hrep.receiver_pseudo;
    e.has_next = true;
    e.is_source = m_sessions.count(a.request_id) != 0;
    LinkPair& lk = m_links[key];
    lk.next_link = phys_sender;
    lk.has_next = true;
    m_committed_requests.insert(a.request_id);

    m_sim.note_hop_established(hs.round + 1);
    kern.trace()
        .record(kern.now(), "hop_established", m_id)
        .kv("req", a.request_id)
        .kv("attempt", a.attempt)
        .kv("next", hs.pending_hrep.receiver_pseudo.short_hex())
        .kv("class", hs.pending_hrep.node_class)
        .kv("rounds", hs.round + 1);
    m_searches.erase(it);
}

// ---------------------------------------------------------------------------
// discovery: receiver side
// ---------------------------------------------------------------------------

void ProtocolNode::on_rreq(const Message& m, NodeId phys_sender) {
    auto& kern = m_sim.kernel();
    const auto& rreq = payload_as<RreqPayload>(m);

    if (m_sessions.count(rreq.request_id) != 0) return; // own request echoed back

    const bool is_dest = position_matches_history(rreq.dest_pos);
    if (is_dest) {
        auto dit = m_dest_duties.find(rreq.request_id);
        if (dit != m_dest_duties.end() &&
            dit->second.answered >= m_sim.knobs().max_candidates)
            return; // answered enough arrivals of this request
    } else if (m_committed_requests.count(rreq.request_id) != 0) {
        return; // already part of this route: keeps candidates disjoint and loop-free
    }

    // denied winners stay out of this request
    const PseudoId my_pseudo = request_pseudo(rreq.request_id);
    for (const auto& ex : rreq.excluded) {
        if (ex == my_pseudo) {
            m_pending_wins.erase({rreq.request_id, rreq.attempt});
            return;
        }
    }
    auto pw = m_pending_wins.find({rreq.request_id, rreq.attempt});
    if (pw != m_pending_wins.end() && pw->second.rreq.round >= rreq.round) return;

    if (rreq.carries_real_id && m_sim.knobs().source_auth) {
        const NodeId subject = rreq.real_sender;
        if (m_trust.knows(subject)) {
            if (m_trust.level_or(subject, 0) < m_sim.knobs().trust_floor) {
                kern.trace()
                    .record(kern.now(), "trust_drop", m_id)
                    .kv("subject", std::uint64_t(subject))
                    .kv("cause", "below_floor");
                return;
            }
            // trusted: refresh location and TUSN, then contend
            NeighborEntry& e = m_neighbors[subject];
            e.id = subject;
            e.position = rreq.sender_pos;
            e.has_position = true;
            e.tusn = rreq.sender_tusn;
            e.last_beacon_time = kern.now();
        } else {
            const bool already_pending = m_gated.count(subject) != 0;
            m_gated[subject].push_back(GatedRreq{rreq, phys_sender, is_dest});
            if (already_pending) return;
            const std::uint64_t nonce = m_sim.next_nonce();
            m_trust_nonces[nonce] = subject;
            Message tq = make_message(MessageKind::TrustRequest, kern.now(),
                                      SenderHandle::real(m_id),
                                      TrustRequestPayload{m_id, subject, nonce});
            kern.unicast(m_id, phys_sender, tq);
            const auto timeout = static_cast<SimTime>(
                m_sim.knobs().trust_request_timeout_ms * kMicrosPerMilli);
            kern.schedule_in(timeout, [this, subject] {
                auto git = m_gated.find(subject);
                if (git == m_gated.end()) return;
                m_gated.erase(git);
                m_sim.kernel()
                    .trace()
                    .record(m_sim.kernel().now(), "trust_drop", m_id)
                    .kv("subject", std::uint64_t(subject))
                    .kv("cause", "timeout");
            });
            return;
        }
    }

    join_contention(rreq, phys_sender, is_dest);
}

void ProtocolNode::join_contention(const RreqPayload& rreq, NodeId phys_sender, bool is_dest) {
    auto& kern = m_sim.kernel();
    Position my_pos = kern.position(m_id);
    if (m_adversary && m_adversary->kind == AdversaryProfile::Kind::Sybil)
        my_pos = m_adversary->claimed_pos;

    const double my_dist = distance(my_pos, rreq.dest_pos);
    const int cls = classify_receiver(rreq.sender_to_dest, my_dist, kern.radio().range, is_dest,
                                      m_sim.knobs().class_width);
    if (cls == kClassNoProgress) return; // class 4 never contends

    PendingWin ctx;
    ctx.rreq = rreq;
    ctx.my_pseudo = request_pseudo(rreq.request_id);
    ctx.sender_link = phys_sender;
    ctx.claimed_pos = my_pos;
    m_pending_wins[{rreq.request_id, rreq.attempt}] = ctx;

    m_sim.join_contention_round(rreq, phys_sender, m_id, cls, ctx.my_pseudo, my_pos);
}

void ProtocolNode::contention_won(std::uint64_t request_id, int attempt, int round) {
    auto it = m_pending_wins.find({request_id, attempt});
    if (it == m_pending_wins.end()) return;
    PendingWin& ctx = it->second;
    if (ctx.rreq.round != round) return;

    auto& kern = m_sim.kernel();
    if (!kern.alive(m_id)) return;
    const bool is_dest = position_matches_history(ctx.rreq.dest_pos);
    HrepPayload h;
    h.request_id = request_id;
    h.attempt = attempt;
    h.round = round;
    h.receiver_pseudo = ctx.my_pseudo;
    h.claimed_pos = ctx.claimed_pos;
    h.node_class = is_dest ? kClassDestination
                           : classify_receiver(ctx.rreq.sender_to_dest,
                                               distance(ctx.claimed_pos, ctx.rreq.dest_pos),
                                               kern.radio().range, false,
                                               m_sim.knobs().class_width);
    kern.trace()
        .record(kern.now(), "hrep_tx", m_id)
        .kv("req", request_id)
        .kv("attempt", attempt)
        .kv("round", round)
        .kv("class", h.node_class);
    Message m = make_message(MessageKind::Hrep, kern.now(), SenderHandle::anonymous(ctx.my_pseudo),
                             h);
    kern.unicast(m_id, ctx.sender_link, m);
}

void ProtocolNode::on_cnfm(const Message& m, NodeId phys_sender) {
    const auto& c = payload_as<CnfmPayload>(m);
    auto it = m_pending_wins.find({c.request_id, c.attempt});
    if (it == m_pending_wins.end()) return;
    PendingWin ctx = it->second;
    if (!(c.winner_pseudo == ctx.my_pseudo)) return;
    m_pending_wins.erase(it);

    auto& kern = m_sim.kernel();
    const RouteKey key{c.request_id, c.attempt};
    const bool is_dest = position_matches_history(ctx.rreq.dest_pos);

    RoutingTableEntry& e = m_routes[key];
    e.prev_pseudo = c.sender_pseudo;
    e.has_prev = true;
    e.is_destination = is_dest;
    LinkPair& lk = m_links[key];
    lk.prev_link = phys_sender;
    lk.has_prev = true;
    m_committed_requests.insert(c.request_id);

    Message ack = make_message(MessageKind::Ack, kern.now(),
                               SenderHandle::anonymous(ctx.my_pseudo),
                               AckPayload{c.request_id, c.attempt, ctx.my_pseudo});
    kern.unicast(m_id, phys_sender, ack);

    if (is_dest) {
        DestDuty& duty = m_dest_duties[c.request_id];
        duty.request_id = c.request_id;
        if (duty.answered == 0) duty.last_alert_pos = kern.position(m_id);
        duty.answered += 1;
        duty.attempts.insert(c.attempt);
        originate_rrep(ctx.rreq, c.attempt);
        return;
    }

    // the confirmed receiver becomes the next hop sender
    HopSearch hs;
    hs.request_id = c.request_id;
    hs.attempt = c.attempt;
    hs.round = 0;
    hs.dest_pos = ctx.rreq.dest_pos;
    hs.hop_count = ctx.rreq.hop_count + 1;
    m_searches[key] = hs;
    const auto delay = static_cast<SimTime>(m_sim.knobs().data_forward_delay_us);
    kern.schedule_in(delay, [this, key] {
        auto sit = m_searches.find(key);
        if (sit == m_searches.end()) return;
        if (sit->second.awaiting_hrep || sit->second.awaiting_validation) return;
        broadcast_rreq(sit->second);
    });
}

// ---------------------------------------------------------------------------
// rrep path
// ---------------------------------------------------------------------------

AuthCode ProtocolNode::code_for_position(const Position& p) const {
    const double eps = m_sim.knobs().dest_match_epsilon;
    for (auto it = m_reported_history.rbegin(); it != m_reported_history.rend(); ++it) {
        if (distance(it->first, p) <= eps) return it->second;
    }
    return m_latest_code; // mismatch surfaces at the source
}

bool ProtocolNode::position_matches_history(const Position& p) const {
    const double eps = m_sim.knobs().dest_match_epsilon;
    for (const auto& [pos, code] : m_reported_history)
        if (distance(pos, p) <= eps) return true;
    return false;
}

void ProtocolNode::originate_rrep(const RreqPayload& rreq, int attempt) {
    auto& kern = m_sim.kernel();
    const AuthCode code = code_for_position(rreq.dest_pos);
    RrepPayload r;
    r.request_id = rreq.request_id;
    r.attempt = attempt;
    r.sealed_auth = seal(m_token.secret_part, encode_code(code));
    r.hops_from_dest = 1;
    r.path.push_back(request_pseudo(rreq.request_id));

    auto lk = m_links.find({rreq.request_id, attempt});
    if (lk == m_links.end() || !lk->second.has_prev) return;
    kern.trace()
        .record(kern.now(), "rrep_tx", m_id)
        .kv("req", rreq.request_id)
        .kv("attempt", attempt);
    Message m = make_message(MessageKind::Rrep, kern.now(),
                             SenderHandle::anonymous(request_pseudo(rreq.request_id)), r);
    kern.unicast(m_id, lk->second.prev_link, m);
}

void ProtocolNode::on_rrep(const Message& m, NodeId phys_sender) {
    auto& kern = m_sim.kernel();
    RrepPayload r = payload_as<RrepPayload>(m);

    // every reception past the first scores the forwarder we heard it from
    if (r.hops_from_dest >= 2) {
        r.trust_digits.push_back(
            clamp_trust(m_trust.level_or(phys_sender, m_sim.knobs().default_unknown_trust)));
    }

    auto sit = m_sessions.find(r.request_id);
    if (sit != m_sessions.end()) {
        DiscoverySession& s = sit->second;
        if (s.closed) return;
        // authenticate: unseal with the destination's key and compare codes
        const Digest dest_pub = m_sim.public_part_of(s.dest_node);
        const auto opened = open(dest_pub, r.sealed_auth);
        const bool ok = opened && *opened == encode_code(s.expected_code);
        if (!ok) {
            kern.trace()
                .record(kern.now(), "rrep_reject", m_id)
                .kv("req", r.request_id)
                .kv("attempt", r.attempt)
                .kv("cause", "auth_mismatch");
            return;
        }
        RouteCandidate cand;
        cand.request_id = r.request_id;
        cand.attempt = r.attempt;
        cand.hop_count = r.hops_from_dest;
        cand.trust.digits = r.trust_digits;
        cand.arrived_at = kern.now();
        cand.arrival_index = static_cast<int>(s.candidates.size());
        cand.path = r.path;
        cand.path.push_back(request_pseudo(r.request_id));
        std::reverse(cand.path.begin(), cand.path.end()); // source first
        s.candidates.push_back(cand);
        m_sim.note_candidate(m_id, cand);
        return;
    }

    const RouteKey key{r.request_id, r.attempt};
    auto lk = m_links.find(key);
    if (lk == m_links.end() || !lk->second.has_prev) return;
    r.hops_from_dest += 1;
    r.path.push_back(request_pseudo(r.request_id));
    const auto delay = static_cast<SimTime>(m_sim.knobs().data_forward_delay_us);
    const NodeId prev = lk->second.prev_link;
    kern.schedule_in(delay, [this, r, prev] {
        auto& k = m_sim.kernel();
        if (!k.alive(m_id)) return;
        Message fwd = make_message(MessageKind::Rrep, k.now(),
                                   SenderHandle::anonymous(request_pseudo(r.request_id)), r);
        k.unicast(m_id, prev, fwd);
    });
}

void ProtocolNode::close_session(std::uint64_t request_id) {
    auto it = m_sessions.find(request_id);
    if (it == m_sessions.end() || it->second.closed) return;
    DiscoverySession& s = it->second;
    s.closed = true;

    auto& kern = m_sim.kernel();
    auto fit = m_flows.find(s.flow_id);

    s.chosen = route_select(m_sim.config().mode, s.candidates);
    s.succeeded = s.chosen >= 0;
    m_sim.note_discovery_result(s.succeeded);

    if (!s.succeeded) {
        kern.trace().record(kern.now(), "discovery_failed", m_id).kv("req", request_id);
        if (fit != m_flows.end()) {
            FlowState& flow = fit->second;
            flow.discovering = false;
            flow.route_ready = false;
            if (flow.held.empty() && flow.next_seq == 0) {
                // never had a route: the whole flow is unroutable
                for (std::uint64_t seq = 0; seq < flow.packets; ++seq) {
                    m_sim.note_data_offered();
                    kern.trace()
                        .record(kern.now(), "data_unroutable", m_id)
                        .kv("flow", flow.flow_id)
                        .kv("seq", seq);
                }
                flow.next_seq = flow.packets;
            } else {
                while (!flow.held.empty()) {
                    m_sim.note_data_offered();
                    kern.trace()
                        .record(kern.now(), "data_unroutable", m_id)
                        .kv("flow", flow.flow_id)
                        .kv("seq", flow.held.front());
                    flow.held.pop_front();
                }
            }
        }
        return;
    }

    m_sim.note_route_selected(m_id, s);
    if (fit != m_flows.end()) {
        FlowState& flow = fit->second;
        flow.discovering = false;
        flow.route_ready = true;
        flow.route_stale = false;
        flow.request_id = request_id;
        flow.chosen_attempt = s.candidates[static_cast<std::size_t>(s.chosen)].attempt;
        flush_flow(flow);
    }
}

// ---------------------------------------------------------------------------
// data plane
// ---------------------------------------------------------------------------

void ProtocolNode::flush_flow(FlowState& flow) {
    auto& kern = m_sim.kernel();
    const SimTime base =
        flow.data_start > kern.now() ? flow.data_start - kern.now() : 0;
    std::uint64_t i = 0;
    if (!flow.held.empty()) {
        while (!flow.held.empty()) {
            const std::uint64_t seq = flow.held.front();
            flow.held.pop_front();
            const std::uint64_t fid = flow.flow_id;
            kern.schedule_in(base + i * flow.interval, [this, fid, seq] {
                auto it = m_flows.find(fid);
                if (it != m_flows.end()) send_data_packet(it->second, seq);
            });
            ++i;
        }
        return;
    }
    // fresh route: schedule the whole flow
    for (std::uint64_t seq = flow.next_seq; seq < flow.packets; ++seq) {
        const std::uint64_t fid = flow.flow_id;
        const std::uint64_t offset = base + (seq - flow.next_seq) * flow.interval;
        kern.schedule_in(offset, [this, fid, seq] {
            auto it = m_flows.find(fid);
            if (it != m_flows.end()) send_data_packet(it->second, seq);
        });
    }
}

void ProtocolNode::send_data_packet(FlowState& flow, std::uint64_t seq) {
    auto& kern = m_sim.kernel();
    if (!kern.alive(m_id)) return;

    if (flow.route_stale || !flow.route_ready) {
        flow.held.push_back(seq);
        if (!flow.discovering) begin_discovery(flow); // rediscover, then flush
        return;
    }

    if (seq >= flow.next_seq) flow.next_seq = seq + 1;
    m_sim.note_data_offered();

    const RouteKey key{flow.request_id, flow.chosen_attempt};
    auto lk = m_links.find(key);
    if (lk == m_links.end() || !lk->second.has_next) {
        kern.trace().record(kern.now(), "data_unroutable", m_id).kv("flow", flow.flow_id).kv("seq",
                                                                                             seq);
        return;
    }
    kern.trace()
        .record(kern.now(), "data_tx", m_id)
        .kv("flow", flow.flow_id)
        .kv("seq", seq)
        .kv("req", flow.request_id);
    Message m = make_message(MessageKind::Data, kern.now(),
                             SenderHandle::anonymous(request_pseudo(flow.request_id)),
                             DataPayload{flow.flow_id, flow.request_id, flow.chosen_attempt, seq});
    kern.unicast(m_id, lk->second.next_link, m);
}

void ProtocolNode::on_data(const Message& m, NodeId phys_sender) {
    (void)phys_sender;
    auto& kern = m_sim.kernel();
    const auto& d = payload_as<DataPayload>(m);
    const RouteKey key{d.request_id, d.attempt};

    auto rit = m_routes.find(key);
    if (rit == m_routes.end()) return;

    if (rit->second.is_destination) {
        m_sim.note_data_delivered();
        kern.trace()
            .record(kern.now(), "data_delivered", m_id)
            .kv("flow", d.flow_id)
            .kv("seq", d.seq);
        return;
    }

    auto lk = m_links.find(key);
    if (lk == m_links.end() || !lk->second.has_next) return;

    const PacketKey pkt{d.flow_id, d.request_id, d.attempt, d.seq};
    m_sim.watchdog_observe_receive(m_id, pkt);

    if (m_adversary && !adversary_forwards(*m_adversary, kern.rng())) {
        kern.trace()
            .record(kern.now(), "data_drop", m_id)
            .kv("flow", d.flow_id)
            .kv("seq", d.seq);
        return; // the watchdog deadline will catch this
    }

    const auto delay = static_cast<SimTime>(m_sim.knobs().data_forward_delay_us);
    const NodeId next = lk->second.next_link;
    const DataPayload fwd = d;
    kern.schedule_in(delay, [this, fwd, next, pkt] {
        auto& k = m_sim.kernel();
        if (!k.alive(m_id)) return;
        m_sim.watchdog_observe_forward(m_id, pkt);
        k.trace().record(k.now(), "data_fwd", m_id).kv("flow", fwd.flow_id).kv("seq", fwd.seq);
        Message out = make_message(MessageKind::Data, k.now(),
                                   SenderHandle::anonymous(request_pseudo(fwd.request_id)), fwd);
        k.unicast(m_id, next, out);
    });
}

// ---------------------------------------------------------------------------
// destination mobility alerts
// ---------------------------------------------------------------------------

void ProtocolNode::on_mobility_alert(const Message& m, Channel ch) {
    auto& kern = m_sim.kernel();
    const auto& a = payload_as<MobilityAlertPayload>(m);

    if (ch == Channel::Service) {
        if (!m_server_records) return;
        m_server_records->apply_mobility_notice(a.dest, a.new_pos, a.at);
        kern.trace()
            .record(kern.now(), "vhr_alert_applied", m_id)
            .kv("for", std::uint64_t(a.dest))
            .kv("pos", a.new_pos);
        return;
    }

    const RouteKey key{a.request_id, a.attempt};
    auto rit = m_routes.find(key);
    if (rit == m_routes.end()) return;

    if (rit->second.is_source) {
        auto sit = m_sessions.find(a.request_id);
        if (sit != m_sessions.end()) {
            auto fit = m_flows.find(sit->second.flow_id);
            if (fit != m_flows.end()) {
                fit->second.route_stale = true;
                kern.trace()
                    .record(kern.now(), "alert_at_source", m_id)
                    .kv("req", a.request_id)
                    .kv("new_pos", a.new_pos);
            }
        }
        return;
    }

    auto lk = m_links.find(key);
    if (lk == m_links.end() || !lk->second.has_prev) return;
    kern.trace().record(kern.now(), "alert_fwd", m_id).kv("req", a.request_id);
    Message fwd = make_message(MessageKind::MobilityAlert, kern.now(),
                               SenderHandle::anonymous(request_pseudo(a.request_id)),
                               payload_as<MobilityAlertPayload>(m));
    kern.unicast(m_id, lk->second.prev_link, fwd);
}

// ---------------------------------------------------------------------------
// trust requests (source authentication)
// ---------------------------------------------------------------------------

void ProtocolNode::on_trust_request(const Message& m, NodeId phys_sender) {
    auto& kern = m_sim.kernel();
    const auto& q = payload_as<TrustRequestPayload>(m);
    if (q.subject != m_id) return;
    Message resp = make_message(MessageKind::TrustResponse, kern.now(), SenderHandle::real(m_id),
                                TrustResponsePayload{m_id, m_id, true, kern.now(), q.nonce});
    kern.unicast(m_id, phys_sender, resp);
}

// ---------------------------------------------------------------------------
// server: validation, path selector, sybil probing
// ---------------------------------------------------------------------------

void ProtocolNode::on_validation_request(const Message& m, NodeId requester) {
    if (!m_server_records) return;
    server_validate(payload_as<HrepPayload>(m), requester);
}

void ProtocolNode::server_validate(const HrepPayload& hrep, NodeId requester) {
    auto& kern = m_sim.kernel();
    const auto& knobs = m_sim.knobs();
    const std::uint64_t nonce = validation_nonce_for(hrep.request_id, hrep.attempt);

    // de-pseudonymize via position records
    const double tolerance = knobs.update_threshold + knobs.probe_tolerance;
    const auto resolved = m_server_records->resolve_position(hrep.claimed_pos, tolerance);

    if (knobs.pathselector) {
        const auto verdict =
            pathselector_check(*m_watchdog, resolved.has_value(), resolved.value_or(0));
        if (verdict == PathSelectorVerdict::Deny) {
            kern.trace()
                .record(kern.now(), "pathselector_deny", m_id)
                .kv("candidate", std::uint64_t(*resolved))
                .kv("failures", m_watchdog->failure_rate(*resolved));
            server_reply_verdict(requester, nonce, false, "flagged");
            return;
        }
        if (verdict == PathSelectorVerdict::AllowUnknown) {
            kern.trace().record(kern.now(), "pathselector_unknown", m_id).kv("claimed",
                                                                             hrep.claimed_pos);
        }
    }

    if (knobs.sybil_check) {
        PendingProbe probe;
        probe.probe_id = m_sim.next_nonce();
        probe.requester = requester;
        probe.nonce = nonce;
        probe.target = hrep.claimed_pos;
        m_probes[probe.probe_id] = probe;
        ++m_sim.counters().sybil_probes;

        const SimTime deadline =
            kern.now() + static_cast<SimTime>(knobs.probe_timeout_ms * kMicrosPerMilli);
        kern.trace()
            .record(kern.now(), "sybil_probe", m_id)
            .kv("probe", probe.probe_id)
            .kv("pos", probe.target);
        Message pm = make_message(MessageKind::SybilProbe, kern.now(), SenderHandle::real(m_id),
                                  SybilProbePayload{probe.probe_id, m_id, probe.target, deadline});
        kern.service_send_to_position(m_id, probe.target, knobs.probe_tolerance, pm);
        const std::uint64_t pid = probe.probe_id;
        kern.schedule_at(deadline, [this, pid] { server_probe_timeout(pid); });
        return;
    }

    server_reply_verdict(requester, nonce, true, "ok");
}

void ProtocolNode::server_probe_timeout(std::uint64_t probe_id) {
    auto it = m_probes.find(probe_id);
    if (it == m_probes.end() || it->second.done) return;
    PendingProbe probe = it->second;
    m_probes.erase(it);

    auto& kern = m_sim.kernel();
    kern.trace()
        .record(kern.now(), "sybil_verdict", m_id)
        .kv("probe", probe_id)
        .kv("verdict", "sybil");
    m_sim.note_sybil_verdict(probe.nonce, true);
    server_reply_verdict(probe.requester, probe.nonce, false, "sybil");
}

void ProtocolNode::on_sybil_probe(const Message& m) {
    auto& kern = m_sim.kernel();
    const auto& p = payload_as<SybilProbePayload>(m);
    Message reply =
        make_message(MessageKind::SybilProbeReply, kern.now(), SenderHandle::real(m_id),
                     SybilProbeReplyPayload{p.probe_id, m_id, kern.position(m_id)});
    kern.service_send(m_id, p.server, reply);
}

void ProtocolNode::on_sybil_probe_reply(const Message& m) {
    auto it = m_probes.find(payload_as<SybilProbeReplyPayload>(m).probe_id);
    if (it == m_probes.end() || it->second.done) return;
    PendingProbe probe = it->second;
    m_probes.erase(it);

    auto& kern = m_sim.kernel();
    kern.trace()
        .record(kern.now(), "sybil_verdict", m_id)
        .kv("probe", probe.probe_id)
        .kv("verdict", "legitimate");
    m_sim.note_sybil_verdict(probe.nonce, false);
    server_reply_verdict(probe.requester, probe.nonce, true, "probe_answered");
}

void ProtocolNode::server_reply_verdict(NodeId requester, std::uint64_t nonce, bool allow,
                                        const char* why) {
    auto& kern = m_sim.kernel();
    (void)why;
    Message m = make_message(MessageKind::TrustResponse, kern.now(), SenderHandle::real(m_id),
                             TrustResponsePayload{m_id, 0, allow, kern.now(), nonce});
    kern.service_send(m_id, requester, m);
}

// ---------------------------------------------------------------------------

PseudoId ProtocolNode::request_pseudo(std::uint64_t request_id) {
    auto it = m_request_pseudo.find(request_id);
    if (it != m_request_pseudo.end()) return it->second;
    auto& kern = m_sim.kernel();
    Position pos = kern.position(m_id);
    if (m_adversary && m_adversary->kind == AdversaryProfile::Kind::Sybil)
        pos = m_adversary->claimed_pos;
    const PseudoId p = make_pseudo_id(pos, kern.now());
    m_request_pseudo[request_id] = p;
    return p;
}

} // namespace manet
