#ifndef MANET_METRICS_HPP
#define MANET_METRICS_HPP

#include <map>
#include <string>

#include "manet/core.hpp"

namespace manet {

/// Run-level results. Protocol failures (lost routes, dropped packets) are
/// data here, never process errors.
struct Metrics {
    // ratios in [0,1]; NaN when the denominator is zero
    double delivery_ratio = 0.0;
    double route_discovery_success = 0.0;
    double mean_hops = 0.0;
    double chosen_path_avg_trust = 0.0;

    std::uint64_t data_offered = 0;
    std::uint64_t data_delivered = 0;
    std::uint64_t discoveries_started = 0;
    std::uint64_t discoveries_succeeded = 0;
    std::uint64_t hrep_collisions = 0;
    std::uint64_t dead_ends = 0;
    std::uint64_t position_service_failures = 0;

    std::uint64_t watchdog_true_positives = 0;
    std::uint64_t watchdog_false_positives = 0;
    std::uint64_t sybil_true_positives = 0;
    std::uint64_t sybil_false_positives = 0;
    std::uint64_t sybil_probes = 0;

    std::map<std::string, std::uint64_t> control_overhead; // messages sent, by kind
    std::map<int, std::uint64_t> contention_rounds;        // rounds needed per established hop

    bool operator==(const Metrics& o) const;
};

enum class MetricsFormat { Human, Machine };

/// Stable field ordering; the machine format round-trips by re-parsing.
/// Undefined ratios are written as a literal `nan`.
std::string emit_metrics(const Metrics& m, MetricsFormat format);

/// Inverse of the machine format.
Metrics parse_metrics(const std::string& text);

} // namespace manet

#endif
