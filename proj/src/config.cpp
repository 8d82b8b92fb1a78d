#include "manet/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace manet {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct ParseCtx {
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("config line " + std::to_string(line) + ": " + msg);
    }

    double num(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) fail("bad number for '" + key + "': " + v);
            return d;
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            fail("bad number for '" + key + "': " + v);
        }
    }

    std::uint64_t uint(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos = 0;
            const unsigned long long u = std::stoull(v, &pos);
            if (pos != v.size()) fail("bad integer for '" + key + "': " + v);
            return u;
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            fail("bad integer for '" + key + "': " + v);
        }
    }

    int positive_int(const std::string& key, const std::string& v) const {
        const double d = num(key, v);
        if (d < 1 || d != static_cast<int>(d)) fail("'" + key + "' must be a positive integer");
        return static_cast<int>(d);
    }

    bool onoff(const std::string& key, const std::string& v) const {
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        fail("'" + key + "' must be on or off");
    }
};

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    ParseCtx ctx;
    std::string section;
    std::istringstream in(text);
    std::string raw;

    bool saw_count = false;

    while (std::getline(in, raw)) {
        ++ctx.line;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') ctx.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"scenario",    "field",   "radio", "nodes",
                                          "placement",   "mobility", "servers",
                                          "protocol",    "adversaries", "trust",
                                          "traffic",     "script"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) ctx.fail("unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) ctx.fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) ctx.fail("empty key");
        if (value.empty()) ctx.fail("empty value for '" + key + "'");

        auto fields = [&](std::size_t n) {
            auto f = split_csv(value);
            if (f.size() != n)
                ctx.fail("'" + key + "' expects " + std::to_string(n) + " comma-separated values");
            return f;
        };

        if (section == "scenario") {
            if (key == "seed") cfg.seed = ctx.uint(key, value);
            else if (key == "duration_s") cfg.duration_s = ctx.num(key, value);
            else if (key == "mode") {
                const double m = ctx.num(key, value);
                if (m != 1 && m != 2) ctx.fail("mode must be 1 or 2");
                cfg.mode = m == 1 ? RouteMode::TrustedPath : RouteMode::ShortestPath;
            } else if (key == "trace") cfg.trace = ctx.onoff(key, value);
            else ctx.fail("unknown key '" + key + "' in [scenario]");
        } else if (section == "field") {
            if (key == "width_m") cfg.field_width = ctx.num(key, value);
            else if (key == "height_m") cfg.field_height = ctx.num(key, value);
            else ctx.fail("unknown key '" + key + "' in [field]");
        } else if (section == "radio") {
            if (key == "range_m") cfg.radio_range = ctx.num(key, value);
            else ctx.fail("unknown key '" + key + "' in [radio]");
        } else if (section == "nodes") {
            if (key == "count") {
                cfg.node_count = static_cast<std::uint32_t>(ctx.uint(key, value));
                saw_count = true;
            } else ctx.fail("unknown key '" + key + "' in [nodes]");
        } else if (section == "placement") {
            if (key == "node") {
                auto f = fields(3);
                const NodeId id = static_cast<NodeId>(ctx.uint(key, f[0]));
                cfg.placements[id] = Position{ctx.num(key, f[1]), ctx.num(key, f[2])};
            } else ctx.fail("unknown key '" + key + "' in [placement]");
        } else if (section == "mobility") {
            if (key == "model") {
                if (value == "static") cfg.mobility.model = MobilitySpec::Model::Static;
                else if (value == "waypoint") cfg.mobility.model = MobilitySpec::Model::Waypoint;
                else ctx.fail("mobility model must be static or waypoint");
            } else if (key == "speed_min_mps") cfg.mobility.speed_min = ctx.num(key, value);
            else if (key == "speed_max_mps") cfg.mobility.speed_max = ctx.num(key, value);
            else if (key == "max_speed_mps") cfg.mobility.max_speed = ctx.num(key, value);
            else if (key == "step_ms") cfg.mobility.step_ms = ctx.num(key, value);
            else ctx.fail("unknown key '" + key + "' in [mobility]");
        } else if (section == "servers") {
            if (key == "server") cfg.servers.push_back(static_cast<NodeId>(ctx.uint(key, value)));
            else ctx.fail("unknown key '" + key + "' in [servers]");
        } else if (section == "protocol") {
            auto& k = cfg.knobs;
            if (key == "range_threshold_m") k.range_threshold = ctx.num(key, value);
            else if (key == "update_threshold_m") k.update_threshold = ctx.num(key, value);
            else if (key == "region_radius_m") k.region_radius = ctx.num(key, value);
            else if (key == "watchdog_timeout_ms") k.watchdog_timeout_ms = ctx.num(key, value);
            else if (key == "watchdog_flag_threshold") k.watchdog_flag_threshold = ctx.positive_int(key, value);
            else if (key == "probe_timeout_ms") k.probe_timeout_ms = ctx.num(key, value);
            else if (key == "probe_tolerance_m") k.probe_tolerance = ctx.num(key, value);
            else if (key == "prio_slots") k.prio_slots = ctx.positive_int(key, value);
            else if (key == "elim_slots") k.elim_slots = ctx.positive_int(key, value);
            else if (key == "yield_slots") k.yield_slots = ctx.positive_int(key, value);
            else if (key == "slot_us") k.slot_us = ctx.positive_int(key, value);
            else if (key == "trust_floor") k.trust_floor = static_cast<int>(ctx.num(key, value));
            else if (key == "default_unknown_trust") k.default_unknown_trust = static_cast<int>(ctx.num(key, value));
            else if (key == "wait_window_ms") k.wait_window_ms = ctx.num(key, value);
            else if (key == "retry_budget") k.retry_budget = ctx.positive_int(key, value);
            else if (key == "max_candidates") k.max_candidates = ctx.positive_int(key, value);
            else if (key == "max_attempts") k.max_attempts = ctx.positive_int(key, value);
            else if (key == "beacon_interval_ms") k.beacon_interval_ms = ctx.num(key, value);
            else if (key == "class_width_m") k.class_width = ctx.num(key, value);
            else if (key == "m2_processing_delay_us") k.m2_processing_delay_us = ctx.num(key, value);
            else if (key == "trust_request_timeout_ms") k.trust_request_timeout_ms = ctx.num(key, value);
            else if (key == "service_hop_delay_us") k.service_hop_delay_us = ctx.num(key, value);
            else if (key == "data_forward_delay_us") k.data_forward_delay_us = ctx.num(key, value);
            else if (key == "alert_threshold_m") k.alert_threshold = ctx.num(key, value);
            else if (key == "dest_match_epsilon_m") k.dest_match_epsilon = ctx.num(key, value);
            else if (key == "pos_reply_timeout_ms") k.pos_reply_timeout_ms = ctx.num(key, value);
            else if (key == "pathselector") k.pathselector = ctx.onoff(key, value);
            else if (key == "sybil_check") k.sybil_check = ctx.onoff(key, value);
            else if (key == "mobility_alerts") k.mobility_alerts = ctx.onoff(key, value);
            else if (key == "source_auth") k.source_auth = ctx.onoff(key, value);
            else if (key == "handshake") k.handshake = ctx.onoff(key, value);
            else if (key == "beacons") k.beacons = ctx.onoff(key, value);
            else ctx.fail("unknown key '" + key + "' in [protocol]");
        } else if (section == "adversaries") {
            if (key == "dropper") {
                auto f = fields(2);
                AdversaryProfile p;
                p.kind = AdversaryProfile::Kind::Dropper;
                p.node = static_cast<NodeId>(ctx.uint(key, f[0]));
                p.drop_p = ctx.num(key, f[1]);
                if (p.drop_p < 0.0 || p.drop_p > 1.0) ctx.fail("drop probability must be in [0,1]");
                cfg.adversaries.push_back(p);
            } else if (key == "sybil") {
                auto f = fields(3);
                AdversaryProfile p;
                p.kind = AdversaryProfile::Kind::Sybil;
                p.node = static_cast<NodeId>(ctx.uint(key, f[0]));
                p.claimed_pos = Position{ctx.num(key, f[1]), ctx.num(key, f[2])};
                cfg.adversaries.push_back(p);
            } else ctx.fail("unknown key '" + key + "' in [adversaries]");
        } else if (section == "trust") {
            if (key == "level") {
                auto f = fields(2);
                const NodeId id = static_cast<NodeId>(ctx.uint(key, f[0]));
                const double lv = ctx.num(key, f[1]);
                if (lv < kTrustMin || lv > kTrustMax) ctx.fail("trust level must be in [0,9]");
                cfg.trust_levels[id] = static_cast<int>(lv);
            } else ctx.fail("unknown key '" + key + "' in [trust]");
        } else if (section == "traffic") {
            if (key == "flow") {
                auto f = split_csv(value);
                if (f.size() != 5 && f.size() != 6)
                    ctx.fail("'flow' expects src, dst, start_s, packets, interval_ms[, data_start_s]");
                FlowSpec fl;
                fl.source = static_cast<NodeId>(ctx.uint(key, f[0]));
                fl.dest = static_cast<NodeId>(ctx.uint(key, f[1]));
                fl.start_s = ctx.num(key, f[2]);
                fl.packets = ctx.uint(key, f[3]);
                fl.interval_ms = ctx.num(key, f[4]);
                if (f.size() == 6) fl.data_start_s = ctx.num(key, f[5]);
                cfg.flows.push_back(fl);
            } else ctx.fail("unknown key '" + key + "' in [traffic]");
        } else if (section == "script") {
            if (key == "move") {
                auto f = fields(5);
                MoveSpec mv;
                mv.node = static_cast<NodeId>(ctx.uint(key, f[0]));
                mv.start_s = ctx.num(key, f[1]);
                mv.vx = ctx.num(key, f[2]);
                mv.vy = ctx.num(key, f[3]);
                mv.duration_s = ctx.num(key, f[4]);
                cfg.moves.push_back(mv);
            } else if (key == "kill") {
                auto f = fields(2);
                cfg.kills.push_back(
                    KillSpec{static_cast<NodeId>(ctx.uint(key, f[0])), ctx.num(key, f[1])});
            } else ctx.fail("unknown key '" + key + "' in [script]");
        } else {
            ctx.fail("key '" + key + "' outside any section");
        }
    }

    // cross-field validation
    auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
    if (!saw_count || cfg.node_count == 0) fail("[nodes] count is mandatory and must be > 0");
    if (cfg.field_width < 1.0 || cfg.field_height < 1.0) fail("field dimensions must be >= 1 m");
    if (cfg.radio_range <= 0.0) fail("radio range must be positive");
    if (cfg.duration_s <= 0.0) fail("duration must be positive");
    if (cfg.knobs.region_radius <= 0.0) fail("region_radius_m must be positive");
    if (cfg.knobs.region_radius >= std::min(cfg.field_width, cfg.field_height) / 2.0)
        fail("region_radius_m must be below half the smaller field dimension");
    if (cfg.knobs.update_threshold <= 0.0) fail("update_threshold_m must be positive");
    if (cfg.mobility.max_speed <= 0.0) fail("max_speed_mps must be positive");
    if (cfg.mobility.speed_min > cfg.mobility.speed_max) fail("speed_min_mps above speed_max_mps");
    if (cfg.mobility.speed_max > cfg.mobility.max_speed)
        fail("speed_max_mps exceeds max_speed_mps");
    if (cfg.knobs.trust_floor < kTrustMin || cfg.knobs.trust_floor > kTrustMax)
        fail("trust_floor must be in [0,9]");
    if (cfg.knobs.default_unknown_trust < kTrustMin || cfg.knobs.default_unknown_trust > kTrustMax)
        fail("default_unknown_trust must be in [0,9]");

    auto check_node = [&](NodeId n, const std::string& what) {
        if (n >= cfg.node_count) fail("unknown node " + std::to_string(n) + " in " + what);
    };
    for (const auto& [id, pos] : cfg.placements) {
        check_node(id, "[placement]");
        if (!(pos.x >= 0 && pos.x <= cfg.field_width && pos.y >= 0 && pos.y <= cfg.field_height))
            fail("placement of node " + std::to_string(id) + " outside the field");
    }
    {
        std::set<NodeId> seen;
        for (NodeId s : cfg.servers) {
            check_node(s, "[servers]");
            if (!seen.insert(s).second) fail("duplicate server " + std::to_string(s));
        }
    }
    {
        std::set<NodeId> seen;
        for (const auto& a : cfg.adversaries) {
            check_node(a.node, "[adversaries]");
            if (!seen.insert(a.node).second)
                fail("node " + std::to_string(a.node) + " has multiple adversary profiles");
        }
    }
    for (const auto& [id, lv] : cfg.trust_levels) check_node(id, "[trust]");
    for (const auto& f : cfg.flows) {
        check_node(f.source, "[traffic]");
        check_node(f.dest, "[traffic]");
        if (f.source == f.dest) fail("flow source equals destination");
    }
    for (const auto& m : cfg.moves) check_node(m.node, "[script]");
    for (const auto& k : cfg.kills) check_node(k.node, "[script]");

    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_text(const ScenarioConfig& cfg) {
    std::ostringstream o;
    o << "[scenario]\n";
    o << "seed = " << cfg.seed << "\n";
    o << "duration_s = " << format_double(cfg.duration_s, 6) << "\n";
    o << "mode = " << (cfg.mode == RouteMode::TrustedPath ? 1 : 2) << "\n";
    o << "trace = " << (cfg.trace ? "on" : "off") << "\n";
    o << "[field]\n";
    o << "width_m = " << format_double(cfg.field_width, 3) << "\n";
    o << "height_m = " << format_double(cfg.field_height, 3) << "\n";
    o << "[radio]\n";
    o << "range_m = " << format_double(cfg.radio_range, 3) << "\n";
    o << "[nodes]\n";
    o << "count = " << cfg.node_count << "\n";
    if (!cfg.placements.empty()) {
        o << "[placement]\n";
        for (const auto& [id, p] : cfg.placements)
            o << "node = " << id << ", " << format_double(p.x, 6) << ", " << format_double(p.y, 6)
              << "\n";
    }
    return o.str();
}

} // namespace manet
