#include "manet/trust.hpp"

namespace manet {

double avg_trust(const TrustString& s) {
    double sum = 0.0;
    for (int d : s.digits) sum += d;
    return sum / static_cast<double>(s.digits.size());
}

namespace {

// three-way: negative when a beats b
int compare_by_trust(const RouteCandidate& a, const RouteCandidate& b) {
    const bool sa = !a.trust.empty();
    const bool sb = !b.trust.empty();
    if (sa != sb) return sa ? -1 : 1; // scored beats unscored
    if (!sa) return 0;
    const double ta = avg_trust(a.trust);
    const double tb = avg_trust(b.trust);
    if (ta != tb) return ta > tb ? -1 : 1;
    return 0;
}

int compare_by_hops(const RouteCandidate& a, const RouteCandidate& b) {
    if (a.hop_count != b.hop_count) return a.hop_count < b.hop_count ? -1 : 1;
    return 0;
}

} // namespace

int route_select(RouteMode mode, const std::vector<RouteCandidate>& candidates) {
    if (candidates.empty()) return -1;
    int best = 0;
    for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
        const RouteCandidate& a = candidates[i];
        const RouteCandidate& b = candidates[best];
        int cmp;
        if (mode == RouteMode::TrustedPath) {
            cmp = compare_by_trust(a, b);
            if (cmp == 0) cmp = compare_by_hops(a, b);
        } else {
            cmp = compare_by_hops(a, b);
            if (cmp == 0) cmp = compare_by_trust(a, b);
        }
        if (cmp == 0) cmp = a.arrival_index < b.arrival_index ? -1 : 1;
        if (cmp < 0) best = i;
    }
    return best;
}

} // namespace manet
