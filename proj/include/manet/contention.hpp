#ifndef MANET_CONTENTION_HPP
#define MANET_CONTENTION_HPP

#include <map>
#include <vector>

#include "manet/core.hpp"
#include "manet/rng.hpp"

namespace manet {

/// EY-NPMA phase parameters. The mechanism comes from the protocol; the
/// counts are configurable (HIPERLAN-flavored defaults).
struct ContentionConfig {
    int n_priority_slots = 4; // one per contending class 0..3
    int n_elim_slots = 12;
    int n_yield_slots = 14;
    SimTime slot_duration = 10; // microseconds
};

// Receiver classes. 0 is the destination itself (highest priority); 1..3
// order by geographic progress; 4 never contends.
constexpr int kClassDestination = 0;
constexpr int kClassNoProgress = 4;

/// Classifies a receiver by the progress dd = l - receiver_to_dest it
/// offers, with class width d = r/3 (or an explicit override):
///   destination -> 0, dd > 2d -> 1, d <= dd <= 2d -> 2, 0 <= dd < d -> 3,
///   dd < 0 -> 4.
int classify_receiver(double sender_to_dest, double receiver_to_dest, double r,
                      bool is_destination, double class_width_override = 0.0);

struct Contender {
    NodeId node = 0;
    int node_class = 0;
};

/// Prioritization: only the lowest-numbered (highest-priority) class
/// present survives; later classes sense the earlier burst and quit.
std::vector<Contender> contention_prioritization(const std::vector<Contender>& participants);

struct EliminationResult {
    std::vector<Contender> survivors;
    std::vector<int> draws; // parallel to input order
    int max_burst = 0;
};

/// Elimination: every survivor bursts for a uniform 1..n_elim_slots slots;
/// only the longest bursts pass the survival verification slot.
/// Draws consume rng in input order, so callers pass a deterministic order.
EliminationResult contention_elimination(const std::vector<Contender>& survivors,
                                         int n_elim_slots, Rng& rng);

struct YieldOutcome {
    bool collision = false;
    NodeId winner = 0;
    int winner_class = 0;
    int winner_delay = 0;
    std::vector<int> draws;
};

/// Yield: every survivor listens for a uniform 0..n_yield_slots-1 slots; a
/// unique minimum sends its hrep, two or more minima collide.
YieldOutcome contention_yield(const std::vector<Contender>& survivors, int n_yield_slots,
                              Rng& rng);

struct ContentionResult {
    bool empty = false;
    bool collision = false;
    NodeId winner = 0;
    int winner_class = 0;
    int surviving_class = 0;
    int prio_survivors = 0;
    int elim_survivors = 0;
    int max_burst = 0;
    int winner_delay = 0;
    SimTime resolve_offset = 0; // time from contention start to hrep slot
};

/// Full three-phase round over the participant set (classes 0..3).
/// Participants must be sorted by node id for deterministic draws.
ContentionResult run_contention(const std::vector<Contender>& participants,
                                const ContentionConfig& cfg, Rng& rng);

} // namespace manet

#endif
