#ifndef MANET_BATCH_HPP
#define MANET_BATCH_HPP

#include <vector>

#include "manet/config.hpp"
#include "manet/simulation.hpp"

namespace manet {

struct SeedResult {
    std::uint64_t seed = 0;
    Metrics metrics;
    std::string trace_text;
};

/// Runs the scenario once per seed in [first, last]. Each replica owns a
/// full Simulation and shares no state, so jobs > 1 fans them out across
/// OpenMP threads; jobs == 1 is the serial reference path. Results come
/// back in seed order either way and are identical between the two paths.
std::vector<SeedResult> run_seed_batch(const ScenarioConfig& cfg, std::uint64_t first,
                                       std::uint64_t last, int jobs);

/// Aggregate view over a batch: arithmetic means of the headline ratios.
struct BatchSummary {
    double mean_delivery_ratio = 0.0;
    double mean_discovery_success = 0.0;
    std::uint64_t runs = 0;
};

BatchSummary summarize(const std::vector<SeedResult>& results);

} // namespace manet

#endif
