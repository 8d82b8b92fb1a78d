#ifndef MANET_TRUST_HPP
#define MANET_TRUST_HPP

#include <map>
#include <string>
#include <vector>

#include "manet/core.hpp"

namespace manet {

/// Digits accumulated along the rrep reverse path, one trust level per
/// reception past the first (the destination itself is never scored).
struct TrustString {
    std::vector<int> digits;

    bool empty() const { return digits.empty(); }
    std::size_t size() const { return digits.size(); }

    void append(int level) { digits.push_back(clamp_trust(level)); }

    std::string str() const {
        std::string s;
        s.reserve(digits.size());
        for (int d : digits) s.push_back(static_cast<char>('0' + d));
        return s;
    }
};

/// Arithmetic mean of the digits. Pre: non-empty (empty strings exclude the
/// candidate from trusted-path selection instead).
double avg_trust(const TrustString& s);

enum class RouteMode {
    TrustedPath = 1,  // maximize average trust
    ShortestPath = 2, // minimize hop count
};

struct RouteCandidate {
    std::uint64_t request_id = 0;
    int attempt = 0;
    std::vector<PseudoId> path; // pseudo chain, destination first
    int hop_count = 0;
    TrustString trust;
    SimTime arrived_at = 0;
    int arrival_index = 0;
};

/// Picks the best candidate for the mode. Mode 1 takes the highest average
/// trust (candidates with no digits are excluded unless every one is);
/// mode 2 takes the fewest hops. Ties fall to the other criterion, then to
/// earliest arrival. Pure in (mode, candidates, arrival order).
/// Returns an index into `candidates`, or -1 when the set is empty.
int route_select(RouteMode mode, const std::vector<RouteCandidate>& candidates);

/// Node-wide trust knowledge, seeded from the scenario. Beacon-verification
/// penalties decrement it; explicit grants set it.
class TrustStore {
  public:
    void set(NodeId n, int level) { m_levels[n] = clamp_trust(level); }

    bool knows(NodeId n) const { return m_levels.count(n) != 0; }

    int level_or(NodeId n, int fallback) const {
        auto it = m_levels.find(n);
        return it == m_levels.end() ? clamp_trust(fallback) : it->second;
    }

    void penalize(NodeId n, int penalty) {
        auto it = m_levels.find(n);
        const int cur = it == m_levels.end() ? kTrustMin : it->second;
        m_levels[n] = clamp_trust(cur - penalty);
    }

    const std::map<NodeId, int>& levels() const { return m_levels; }

  private:
    std::map<NodeId, int> m_levels;
};

} // namespace manet

#endif
