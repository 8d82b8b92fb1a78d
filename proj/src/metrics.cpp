#include "manet/metrics.hpp"

#include <cmath>
#include <sstream>

namespace manet {
namespace {

bool ratio_eq(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return a == b;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    return format_double(v, 6);
}

} // namespace

bool Metrics::operator==(const Metrics& o) const {
    return ratio_eq(delivery_ratio, o.delivery_ratio) &&
           ratio_eq(route_discovery_success, o.route_discovery_success) &&
           ratio_eq(mean_hops, o.mean_hops) &&
           ratio_eq(chosen_path_avg_trust, o.chosen_path_avg_trust) &&
           data_offered == o.data_offered && data_delivered == o.data_delivered &&
           discoveries_started == o.discoveries_started &&
           discoveries_succeeded == o.discoveries_succeeded &&
           hrep_collisions == o.hrep_collisions && dead_ends == o.dead_ends &&
           position_service_failures == o.position_service_failures &&
           watchdog_true_positives == o.watchdog_true_positives &&
           watchdog_false_positives == o.watchdog_false_positives &&
           sybil_true_positives == o.sybil_true_positives &&
           sybil_false_positives == o.sybil_false_positives && sybil_probes == o.sybil_probes &&
           control_overhead == o.control_overhead && contention_rounds == o.contention_rounds;
}

std::string emit_metrics(const Metrics& m, MetricsFormat format) {
    std::ostringstream o;
    if (format == MetricsFormat::Machine) {
        o << "delivery_ratio = " << num(m.delivery_ratio) << "\n";
        o << "route_discovery_success = " << num(m.route_discovery_success) << "\n";
        o << "mean_hops = " << num(m.mean_hops) << "\n";
        o << "chosen_path_avg_trust = " << num(m.chosen_path_avg_trust) << "\n";
        o << "data_offered = " << m.data_offered << "\n";
        o << "data_delivered = " << m.data_delivered << "\n";
        o << "discoveries_started = " << m.discoveries_started << "\n";
        o << "discoveries_succeeded = " << m.discoveries_succeeded << "\n";
        o << "hrep_collisions = " << m.hrep_collisions << "\n";
        o << "dead_ends = " << m.dead_ends << "\n";
        o << "position_service_failures = " << m.position_service_failures << "\n";
        o << "watchdog_true_positives = " << m.watchdog_true_positives << "\n";
        o << "watchdog_false_positives = " << m.watchdog_false_positives << "\n";
        o << "sybil_true_positives = " << m.sybil_true_positives << "\n";
        o << "sybil_false_positives = " << m.sybil_false_positives << "\n";
        o << "sybil_probes = " << m.sybil_probes << "\n";
        for (const auto& [kind, count] : m.control_overhead)
            o << "control_overhead." << kind << " = " << count << "\n";
        for (const auto& [rounds, count] : m.contention_rounds)
            o << "contention_rounds." << rounds << " = " << count << "\n";
        return o.str();
    }

    o << "metric                        value\n";
    o << "delivery_ratio                " << num(m.delivery_ratio) << "\n";
    o << "route_discovery_success       " << num(m.route_discovery_success) << "\n";
    o << "mean_hops                     " << num(m.mean_hops) << "\n";
    o << "chosen_path_avg_trust         " << num(m.chosen_path_avg_trust) << "\n";
    o << "data offered/delivered        " << m.data_offered << "/" << m.data_delivered << "\n";
    o << "discoveries started/ok        " << m.discoveries_started << "/"
      << m.discoveries_succeeded << "\n";
    o << "hrep_collisions               " << m.hrep_collisions << "\n";
    o << "dead_ends                     " << m.dead_ends << "\n";
    o << "position_service_failures     " << m.position_service_failures << "\n";
    o << "watchdog detections tp/fp     " << m.watchdog_true_positives << "/"
      << m.watchdog_false_positives << "\n";
    o << "sybil detections tp/fp        " << m.sybil_true_positives << "/"
      << m.sybil_false_positives << " (probes " << m.sybil_probes << ")\n";
    o << "control overhead:\n";
    for (const auto& [kind, count] : m.control_overhead)
        o << "  " << kind << " = " << count << "\n";
    o << "contention rounds histogram:\n";
    for (const auto& [rounds, count] : m.contention_rounds)
        o << "  " << rounds << " = " << count << "\n";
    return o.str();
}

Metrics parse_metrics(const std::string& text) {
    Metrics m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            while (!s.empty() && s.front() == ' ') s.erase(s.begin());
            while (!s.empty() && s.back() == ' ') s.pop_back();
        };
        strip(key);
        strip(value);
        const double d = value == "nan" ? std::nan("") : std::stod(value);
        const auto u = static_cast<std::uint64_t>(d);

        if (key == "delivery_ratio") m.delivery_ratio = d;
        else if (key == "route_discovery_success") m.route_discovery_success = d;
        else if (key == "mean_hops") m.mean_hops = d;
        else if (key == "chosen_path_avg_trust") m.chosen_path_avg_trust = d;
        else if (key == "data_offered") m.data_offered = u;
        else if (key == "data_delivered") m.data_delivered = u;
        else if (key == "discoveries_started") m.discoveries_started = u;
        else if (key == "discoveries_succeeded") m.discoveries_succeeded = u;
        else if (key == "hrep_collisions") m.hrep_collisions = u;
        else if (key == "dead_ends") m.dead_ends = u;
        else if (key == "position_service_failures") m.position_service_failures = u;
        else if (key == "watchdog_true_positives") m.watchdog_true_positives = u;
        else if (key == "watchdog_false_positives") m.watchdog_false_positives = u;
        else if (key == "sybil_true_positives") m.sybil_true_positives = u;
        else if (key == "sybil_false_positives") m.sybil_false_positives = u;
        else if (key == "sybil_probes") m.sybil_probes = u;
        else if (key.rfind("control_overhead.", 0) == 0)
            m.control_overhead[key.substr(17)] = u;
        else if (key.rfind("contention_rounds.", 0) == 0)
            m.contention_rounds[std::stoi(key.substr(18))] = u;
    }
    return m;
}

} // namespace manet
