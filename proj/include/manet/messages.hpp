#ifndef MANET_MESSAGES_HPP
#define MANET_MESSAGES_HPP

#include <string>
#include <variant>
#include <vector>

#include "manet/core.hpp"

namespace manet {

// Wire formats are fixed-width records so runs stay bit-stable:
// node ids 32-bit, positions two 64-bit reals, times 64-bit microseconds,
// codes 64-bit, pseudo ids 16 bytes, trust digits one byte each.

enum class MessageKind {
    Beacon,
    Rreq,
    Hrep,
    Cnfm,
    Ack,
    Rrep,
    HelloM1,
    ReplyM2,
    TrustRequest,
    TrustResponse,
    PosUpdate,
    PosRequest,
    PosReply,
    MobilityAlert,
    SybilProbe,
    SybilProbeReply,
    Data,
};

const char* kind_name(MessageKind k);

/// Public key plus an authority attestation binding it to the owner id.
struct Certificate {
    NodeId owner = 0;
    Digest public_part{};
    std::vector<std::uint8_t> signature;
};

/// Periodic position announcement, subject to range and mobility checks.
struct BeaconPayload {
    NodeId sender = 0;
    Position pos;
    std::uint64_t tusn = 0;
};

struct RreqPayload {
    std::uint64_t request_id = 0;
    int attempt = 0; // candidate-gathering wave number
    int round = 0;   // retry number within the wave
    Position dest_pos;
    double sender_to_dest = 0.0; // l, recomputed by each hop sender
    PseudoId sender_pseudo;
    int hop_count = 0;
    std::vector<PseudoId> excluded; // winners denied by validation
    // Present only when the scenario runs real-id requests (source trust
    // authentication); empty otherwise.
    bool carries_real_id = false;
    NodeId real_sender = 0;
    Position sender_pos;
    std::uint64_t sender_tusn = 0;
};

struct HrepPayload {
    std::uint64_t request_id = 0;
    int attempt = 0;
    int round = 0;
    PseudoId receiver_pseudo;
    Position claimed_pos;
    int node_class = 0;
};

struct CnfmPayload {
    std::uint64_t request_id = 0;
    int attempt = 0;
    PseudoId winner_pseudo;
    PseudoId sender_pseudo;
};

struct AckPayload {
    std::uint64_t request_id = 0;
    int attempt = 0;
    PseudoId winner_pseudo;
};

struct RrepPayload {
    std::uint64_t request_id = 0;
    int attempt = 0;
    std::vector<std::uint8_t> sealed_auth;
    std::vector<int> trust_digits; // reverse-path trust string
    int hops_from_dest = 0;        // transmissions so far on the reverse path
    std::vector<PseudoId> path;    // pseudo chain, destination first
};

struct HelloM1Payload {
    NodeId sender = 0;
    Certificate cert;
    Position pos;
};

struct ReplyM2Payload {
    NodeId sender = 0;
    NodeId to = 0;
    Certificate cert;
    Position pos;
    SimTime m1_sent_at = 0;
};

struct TrustRequestPayload {
    NodeId requester = 0;
    NodeId subject = 0;
    std::uint64_t nonce = 0;
};

/// Doubles as the server's validation verdict for a forwarded hrep.
struct TrustResponsePayload {
    NodeId responder = 0;
    NodeId subject = 0;
    bool verdict = false;
    SimTime at = 0;
    std::uint64_t nonce = 0;
};

struct PosUpdatePayload {
    NodeId node = 0;
    Position pos;
    SimTime update_time = 0;
    AuthCode code = 0;
};

struct PosRequestPayload {
    NodeId requester = 0;
    NodeId target = 0;
    std::uint64_t query_id = 0;
};

struct PosReplyPayload {
    NodeId server = 0;
    NodeId target = 0;
    bool found = false;
    Position pos;
    SimTime update_time = 0;
    AuthCode code = 0;
    std::uint64_t query_id = 0;
};

struct MobilityAlertPayload {
    std::uint64_t request_id = 0;
    int attempt = 0;
    NodeId dest = 0;
    Position new_pos;
    SimTime at = 0;
};

struct SybilProbePayload {
    std::uint64_t probe_id = 0;
    NodeId server = 0;
    Position target_pos;
    SimTime deadline = 0;
};

struct SybilProbeReplyPayload {
    std::uint64_t probe_id = 0;
    NodeId responder = 0;
    Position pos;
};

struct DataPayload {
    std::uint64_t flow_id = 0;
    std::uint64_t request_id = 0;
    int attempt = 0;
    std::uint64_t seq = 0;
};

using MessagePayload = std::variant<BeaconPayload,
                                    RreqPayload,
                                    HrepPayload,
                                    CnfmPayload,
                                    AckPayload,
                                    RrepPayload,
                                    HelloM1Payload,
                                    ReplyM2Payload,
                                    TrustRequestPayload,
                                    TrustResponsePayload,
                                    PosUpdatePayload,
                                    PosRequestPayload,
                                    PosReplyPayload,
                                    MobilityAlertPayload,
                                    SybilProbePayload,
                                    SybilProbeReplyPayload,
                                    DataPayload>;

/// Sender handle on the wire: real NodeId for service traffic, PseudoId
/// for anonymous routing traffic.
struct SenderHandle {
    bool is_pseudo = false;
    NodeId id = 0;
    PseudoId pseudo;

    static SenderHandle real(NodeId n) { return SenderHandle{false, n, {}}; }
    static SenderHandle anonymous(const PseudoId& p) { return SenderHandle{true, 0, p}; }
};

struct Message {
    MessageKind kind = MessageKind::Beacon;
    SimTime sent_at = 0;
    SenderHandle sender;
    MessagePayload payload;
};

template <typename P>
Message make_message(MessageKind kind, SimTime sent_at, SenderHandle sender, P payload) {
    Message m;
    m.kind = kind;
    m.sent_at = sent_at;
    m.sender = sender;
    m.payload = std::move(payload);
    return m;
}

template <typename P>
const P& payload_as(const Message& m) {
    return std::get<P>(m.payload);
}

} // namespace manet

#endif
