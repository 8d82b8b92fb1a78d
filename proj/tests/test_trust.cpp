#include "doctest.h"
#include "manet/rng.hpp"
#include "manet/trust.hpp"

using namespace manet;

namespace {

RouteCandidate cand(int idx, std::initializer_list<int> digits, int hops) {
    RouteCandidate c;
    c.arrival_index = idx;
    c.hop_count = hops;
    for (int d : digits) c.trust.append(d);
    return c;
}

} // namespace

TEST_SUITE_BEGIN("trust");

TEST_CASE("trust string digits and rendering") {
    TrustString s;
    s.append(5);
    s.append(4);
    s.append(4);
    CHECK(s.str() == "544");
    CHECK(s.size() == 3);
    s.append(42); // clamped into the digit range
    CHECK(s.str() == "5449");
}

TEST_CASE("avg_trust on the worked strings") {
    TrustString p1;
    for (int d : {5, 4, 4}) p1.append(d);
    TrustString p2;
    for (int d : {8, 7, 8, 7, 5}) p2.append(d);
    CHECK(avg_trust(p1) == doctest::Approx(4.3333333).epsilon(1e-6));
    CHECK(format_double(avg_trust(p1), 2) == "4.33");
    CHECK(avg_trust(p2) == 7.0);
    TrustString one;
    one.append(9);
    CHECK(avg_trust(one) == 9.0);
}

TEST_CASE("avg_trust stays between the extreme digits") {
    Rng rng(15);
    for (int i = 0; i < 2000; ++i) {
        TrustString s;
        int lo = 9;
        int hi = 0;
        const int n = 1 + static_cast<int>(rng.uniform_u64(10));
        for (int j = 0; j < n; ++j) {
            const int d = static_cast<int>(rng.uniform_u64(10));
            s.append(d);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        const double a = avg_trust(s);
        REQUIRE(a >= lo);
        REQUIRE(a <= hi);
    }
}

TEST_CASE("route_select: worked example, both modes") {
    std::vector<RouteCandidate> cands;
    cands.push_back(cand(0, {5, 4, 4}, 4));    // path 1: avg 4.33, 4 hops
    cands.push_back(cand(1, {8, 7, 8, 7, 5}, 6)); // path 2: avg 7.0
    CHECK(route_select(RouteMode::TrustedPath, cands) == 1);
    CHECK(route_select(RouteMode::ShortestPath, cands) == 0);
}

TEST_CASE("route_select edge cases and tie-breaks") {
    CHECK(route_select(RouteMode::TrustedPath, {}) == -1);

    std::vector<RouteCandidate> one{cand(0, {3}, 2)};
    CHECK(route_select(RouteMode::TrustedPath, one) == 0);
    CHECK(route_select(RouteMode::ShortestPath, one) == 0);

    // equal trust: fewer hops wins in mode 1
    std::vector<RouteCandidate> t{cand(0, {5, 5}, 4), cand(1, {5, 5}, 3)};
    CHECK(route_select(RouteMode::TrustedPath, t) == 1);

    // equal hops: higher trust wins in mode 2
    std::vector<RouteCandidate> h{cand(0, {2, 2}, 3), cand(1, {6, 6}, 3)};
    CHECK(route_select(RouteMode::ShortestPath, h) == 1);

    // full tie: earliest arrival
    std::vector<RouteCandidate> e{cand(0, {4}, 3), cand(1, {4}, 3)};
    CHECK(route_select(RouteMode::TrustedPath, e) == 0);
    CHECK(route_select(RouteMode::ShortestPath, e) == 0);

    // empty trust strings are excluded from mode 1 unless all are empty
    std::vector<RouteCandidate> mixed{cand(0, {}, 1), cand(1, {2}, 5)};
    CHECK(route_select(RouteMode::TrustedPath, mixed) == 1);
    std::vector<RouteCandidate> none{cand(0, {}, 5), cand(1, {}, 3)};
    CHECK(route_select(RouteMode::TrustedPath, none) == 1); // falls back to hops
}

TEST_CASE("mode-1 argmax unchanged by appending a constant digit to equal-length strings") {
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial) {
        const int len = 1 + static_cast<int>(rng.uniform_u64(6));
        std::vector<RouteCandidate> cands;
        for (int i = 0; i < 4; ++i) {
            RouteCandidate c;
            c.arrival_index = i;
            c.hop_count = len + 1;
            for (int j = 0; j < len; ++j)
                c.trust.append(static_cast<int>(rng.uniform_u64(10)));
            cands.push_back(c);
        }
        const int before = route_select(RouteMode::TrustedPath, cands);
        const int extra = static_cast<int>(rng.uniform_u64(10));
        for (auto& c : cands) c.trust.append(extra);
        const int after = route_select(RouteMode::TrustedPath, cands);
        REQUIRE(before == after);
    }
}

TEST_CASE("route_select is pure: same inputs, same choice") {
    std::vector<RouteCandidate> cands{cand(0, {5, 2}, 3), cand(1, {4, 4}, 3), cand(2, {9}, 7)};
    const int a = route_select(RouteMode::TrustedPath, cands);
    for (int i = 0; i < 50; ++i) REQUIRE(route_select(RouteMode::TrustedPath, cands) == a);
}

TEST_CASE("trust store: floor semantics and penalties") {
    TrustStore t;
    t.set(4, 6);
    CHECK(t.knows(4));
    CHECK_FALSE(t.knows(5));
    CHECK(t.level_or(4, 0) == 6);
    CHECK(t.level_or(5, 3) == 3);
    t.penalize(4, 2);
    CHECK(t.level_or(4, 0) == 4);
    for (int i = 0; i < 10; ++i) t.penalize(4, 3);
    CHECK(t.level_or(4, 9) == 0); // floor at zero
}

TEST_SUITE_END();
