#include "manet/batch.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace manet {

std::vector<SeedResult> run_seed_batch(const ScenarioConfig& cfg, std::uint64_t first,
                                       std::uint64_t last, int jobs) {
    const std::size_t n = static_cast<std::size_t>(last - first + 1);
    std::vector<SeedResult> results(n);

    if (jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const std::uint64_t seed = first + static_cast<std::uint64_t>(i);
            ScenarioResult r = run_scenario(cfg, seed);
            results[static_cast<std::size_t>(i)] =
                SeedResult{seed, std::move(r.metrics), std::move(r.trace_text)};
        }
        return results;
#endif
    }

    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t seed = first + i;
        ScenarioResult r = run_scenario(cfg, seed);
        results[i] = SeedResult{seed, std::move(r.metrics), std::move(r.trace_text)};
    }
    return results;
}

BatchSummary summarize(const std::vector<SeedResult>& results) {
    BatchSummary s;
    s.runs = results.size();
    if (results.empty()) return s;
    double dr = 0.0;
    double ds = 0.0;
    std::uint64_t dr_n = 0;
    std::uint64_t ds_n = 0;
    for (const auto& r : results) {
        if (!std::isnan(r.metrics.delivery_ratio)) {
            dr += r.metrics.delivery_ratio;
            ++dr_n;
        }
        if (!std::isnan(r.metrics.route_discovery_success)) {
            ds += r.metrics.route_discovery_success;
            ++ds_n;
        }
    }
    s.mean_delivery_ratio = dr_n ? dr / static_cast<double>(dr_n) : std::nan("");
    s.mean_discovery_success = ds_n ? ds / static_cast<double>(ds_n) : std::nan("");
    return s;
}

} // namespace manet
