#ifndef MANET_CONFIG_HPP
#define MANET_CONFIG_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "manet/contention.hpp"
#include "manet/core.hpp"
#include "manet/defense.hpp"
#include "manet/trust.hpp"

namespace manet {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct FlowSpec {
    NodeId source = 0;
    NodeId dest = 0;
    double start_s = 0.0;
    std::uint64_t packets = 0;
    double interval_ms = 100.0;
    double data_start_s = 0.0; // earliest data send; 0 = right after route selection
};

struct MoveSpec {
    NodeId node = 0;
    double start_s = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double duration_s = 0.0;
};

struct KillSpec {
    NodeId node = 0;
    double at_s = 0.0;
};

struct ProtocolKnobs {
    double range_threshold = -1.0;    // T; -1 means "radio range"
    double update_threshold = 50.0;   // U
    double region_radius = 200.0;     // VHR region radius
    double watchdog_timeout_ms = 50;  // W
    int watchdog_flag_threshold = 3;  // theta
    double probe_timeout_ms = 10;     // P
    double probe_tolerance = 10.0;    // delta, meters
    int prio_slots = 4;
    int elim_slots = 12;
    int yield_slots = 14;
    int slot_us = 10;
    int trust_floor = 3;
    int default_unknown_trust = 0;
    double wait_window_ms = 200;
    int retry_budget = 3;
    int max_candidates = 3; // k: distinct rreq arrivals the destination answers
    int max_attempts = 5;   // candidate-gathering waves per discovery
    double beacon_interval_ms = 1000;
    double class_width = 0.0; // 0 -> r/3
    double m2_processing_delay_us = 0;
    double trust_request_timeout_ms = 50;
    double service_hop_delay_us = 200;
    double data_forward_delay_us = 100;
    double alert_threshold = -1.0; // -1 means "same as U"
    double dest_match_epsilon = 1e-6;
    double pos_reply_timeout_ms = 100;
    bool pathselector = false;
    bool sybil_check = false;
    bool mobility_alerts = true;
    bool source_auth = false;
    bool handshake = true;
    bool beacons = true;
};

struct MobilitySpec {
    enum class Model { Static, Waypoint };
    Model model = Model::Static;
    double speed_min = 1.0;
    double speed_max = 5.0;
    double max_speed = 20.0;
    double step_ms = 100.0;
};

/// Full experiment description parsed from the line-oriented config format.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    double duration_s = 10.0;
    RouteMode mode = RouteMode::ShortestPath;
    bool trace = false;

    double field_width = 1000.0;
    double field_height = 1000.0;
    double radio_range = 300.0;

    std::uint32_t node_count = 0;
    std::map<NodeId, Position> placements; // explicit; the rest are uniform random

    MobilitySpec mobility;
    std::vector<NodeId> servers;
    std::vector<AdversaryProfile> adversaries;
    std::map<NodeId, int> trust_levels; // global per-subject levels
    std::vector<FlowSpec> flows;
    std::vector<MoveSpec> moves;
    std::vector<KillSpec> kills;

    ProtocolKnobs knobs;

    double range_threshold() const {
        return knobs.range_threshold > 0 ? knobs.range_threshold : radio_range;
    }
    double alert_threshold() const {
        return knobs.alert_threshold >= 0 ? knobs.alert_threshold : knobs.update_threshold;
    }
    ContentionConfig contention() const {
        return ContentionConfig{knobs.prio_slots, knobs.elim_slots, knobs.yield_slots,
                                static_cast<SimTime>(knobs.slot_us)};
    }
};

/// Parses and validates the `[section]` / `key = value` format. Unknown
/// keys and sections are rejected; errors name the key and line number.
ScenarioConfig parse_config(const std::string& text);

ScenarioConfig load_config_file(const std::string& path);

/// Serializes a config back to its file format (canonical section order).
std::string config_to_text(const ScenarioConfig& cfg);

} // namespace manet

#endif
