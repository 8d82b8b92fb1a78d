#include "manet/contention.hpp"

#include <algorithm>

namespace manet {

int classify_receiver(double sender_to_dest, double receiver_to_dest, double r,
                      bool is_destination, double class_width_override) {
    if (is_destination) return kClassDestination;
    const double d = class_width_override > 0.0 ? class_width_override : r / 3.0;
    const double dd = sender_to_dest - receiver_to_dest;
    if (dd > 2.0 * d) return 1;
    if (dd >= d) return 2;
    if (dd >= 0.0) return 3;
    return kClassNoProgress;
}

std::vector<Contender> contention_prioritization(const std::vector<Contender>& participants) {
    std::vector<Contender> out;
    if (participants.empty()) return out;
    int best = kClassNoProgress;
    for (const auto& c : participants) best = std::min(best, c.node_class);
    for (const auto& c : participants)
        if (c.node_class == best) out.push_back(c);
    return out;
}

EliminationResult contention_elimination(const std::vector<Contender>& survivors,
                                         int n_elim_slots, Rng& rng) {
    EliminationResult res;
    res.draws.reserve(survivors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        const int burst = rng.uniform_int(1, n_elim_slots);
        res.draws.push_back(burst);
        res.max_burst = std::max(res.max_burst, burst);
    }
    for (std::size_t i = 0; i < survivors.size(); ++i)
        if (res.draws[i] == res.max_burst) res.survivors.push_back(survivors[i]);
    return res;
}

YieldOutcome contention_yield(const std::vector<Contender>& survivors, int n_yield_slots,
                              Rng& rng) {
    YieldOutcome out;
    int min_delay = n_yield_slots;
    out.draws.reserve(survivors.size());
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        const int delay = static_cast<int>(rng.uniform_u64(static_cast<std::uint64_t>(n_yield_slots)));
        out.draws.push_back(delay);
        min_delay = std::min(min_delay, delay);
    }
    int holders = 0;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        if (out.draws[i] == min_delay) {
            ++holders;
            out.winner = survivors[i].node;
            out.winner_class = survivors[i].node_class;
        }
    }
    out.winner_delay = min_delay;
    out.collision = holders >= 2;
    return out;
}

ContentionResult run_contention(const std::vector<Contender>& participants,
                                const ContentionConfig& cfg, Rng& rng) {
    ContentionResult res;
    if (participants.empty()) {
        res.empty = true;
        return res;
    }
    const auto prio = contention_prioritization(participants);
    res.surviving_class = prio.front().node_class;

    const auto elim = contention_elimination(prio, cfg.n_elim_slots, rng);
    const auto yield = contention_yield(elim.survivors, cfg.n_yield_slots, rng);

    res.collision = yield.collision;
    res.winner = yield.winner;
    res.winner_class = yield.winner_class;
    res.prio_survivors = static_cast<int>(prio.size());
    res.elim_survivors = static_cast<int>(elim.survivors.size());
    res.max_burst = elim.max_burst;
    res.winner_delay = yield.winner_delay;
    // prioritization slots + bursts + survival verification slot + yield listen
    res.resolve_offset = cfg.slot_duration *
                         static_cast<SimTime>(cfg.n_priority_slots + elim.max_burst + 1 +
                                              yield.winner_delay + 1);
    return res;
}

} // namespace manet
