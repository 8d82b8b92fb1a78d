#include "manet/messages.hpp"

namespace manet {

const char* kind_name(MessageKind k) {
    switch (k) {
        case MessageKind::Beacon: return "beacon";
        case MessageKind::Rreq: return "rreq";
        case MessageKind::Hrep: return "hrep";
        case MessageKind::Cnfm: return "cnfm";
        case MessageKind::Ack: return "ack";
        case MessageKind::Rrep: return "rrep";
        case MessageKind::HelloM1: return "hello_m1";
        case MessageKind::ReplyM2: return "reply_m2";
        case MessageKind::TrustRequest: return "trust_request";
        case MessageKind::TrustResponse: return "trust_response";
        case MessageKind::PosUpdate: return "pos_update";
        case MessageKind::PosRequest: return "pos_request";
        case MessageKind::PosReply: return "pos_reply";
        case MessageKind::MobilityAlert: return "mobility_alert";
        case MessageKind::SybilProbe: return "sybil_probe";
        case MessageKind::SybilProbeReply: return "sybil_probe_reply";
        case MessageKind::Data: return "data";
    }
    return "unknown";
}

} // namespace manet
