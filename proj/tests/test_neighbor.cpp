#include "doctest.h"
#include "manet/neighbor.hpp"
#include "manet/rng.hpp"

using namespace manet;

namespace {

BeaconPayload beacon(NodeId from, double x, double y, std::uint64_t tusn = 1) {
    return BeaconPayload{from, Position{x, y}, tusn};
}

} // namespace

TEST_SUITE_BEGIN("neighbor");

TEST_CASE("range verification: within T updates, beyond T penalizes and drops") {
    NeighborTable table;
    VerifyConfig cfg{300.0, 20.0, 1};
    const Position own{0, 0};

    // known B at trust 5
    table[2] = NeighborEntry{2, {10, 10}, true, 0, {}, false, 5, 0};

    CHECK(verify_beacon_range(table, own, beacon(2, 150, 0), 1000, cfg) ==
          BeaconVerdict::AcceptedUpdate);
    CHECK(table[2].position == Position{150, 0});

    CHECK(verify_beacon_range(table, own, beacon(2, 350, 0), 2000, cfg) ==
          BeaconVerdict::RejectedRange);
    CHECK(table[2].trust_value == 4);          // 5 -> 4
    CHECK(table[2].position == Position{150, 0}); // claim dropped

    // boundary: exactly T accepted
    CHECK(verify_beacon_range(table, own, beacon(2, 300, 0), 3000, cfg) ==
          BeaconVerdict::AcceptedUpdate);

    // unknown sender within T: added
    CHECK(verify_beacon_range(table, own, beacon(9, 100, 0), 4000, cfg) ==
          BeaconVerdict::AcceptedNew);
    CHECK(table.count(9) == 1);
}

TEST_CASE("mobility verification follows the speed formula") {
    NeighborTable table;
    VerifyConfig cfg{300.0, 20.0, 1};

    // unknown B: added regardless of speed
    CHECK(verify_beacon_mobility(table, beacon(3, 0, 0), 0, cfg) == BeaconVerdict::AcceptedNew);
    table[3].trust_value = 5;

    // 100 m in 10 s -> 10 m/s <= 20: accepted
    CHECK(verify_beacon_mobility(table, beacon(3, 100, 0), 10 * kMicrosPerSecond, cfg) ==
          BeaconVerdict::AcceptedUpdate);
    CHECK(table[3].position == Position{100, 0});

    // 300 m further in 10 s -> 30 m/s > 20: trust down, dropped
    CHECK(verify_beacon_mobility(table, beacon(3, 400, 0), 20 * kMicrosPerSecond, cfg) ==
          BeaconVerdict::RejectedMobility);
    CHECK(table[3].trust_value == 4);
    CHECK(table[3].position == Position{100, 0});

    // zero interval: violation unless the position is unchanged
    CHECK(verify_beacon_mobility(table, beacon(3, 100, 0), 10 * kMicrosPerSecond, cfg) ==
          BeaconVerdict::AcceptedUpdate);
    CHECK(verify_beacon_mobility(table, beacon(3, 101, 0), 10 * kMicrosPerSecond, cfg) ==
          BeaconVerdict::RejectedMobility);
}

TEST_CASE("full pipeline: honest movement is never rejected at defaults") {
    // waypoint-like walk at <= max_speed, beacons every second
    NeighborTable table;
    VerifyConfig cfg{300.0, 20.0, 1};
    Rng rng(21);
    Position b{150, 0};
    const Position own{0, 0};
    SimTime t = 0;
    int rejects = 0;
    for (int i = 0; i < 10000; ++i) {
        t += kMicrosPerSecond;
        // bounded step, and keep it within range of the receiver
        const double ang = rng.uniform_range(0, 6.283185307);
        const double step = rng.uniform_range(0, 19.9);
        Position next{b.x + step * std::cos(ang), b.y + step * std::sin(ang)};
        if (distance(own, next) > 290.0) next = Position{150, 0};
        if (distance(next, b) > 19.9) next = b; // teleport-free reset
        b = next;
        if (!beacon_accepted(process_beacon(table, own, beacon(4, b.x, b.y), t, cfg))) ++rejects;
    }
    CHECK(rejects == 0);
}

TEST_CASE("teleporting adversary is rejected on every such beacon") {
    // alternates an honest re-sync with a claim displaced by 2x max_speed
    // over the elapsed second; every teleport claim must bounce
    NeighborTable table;
    VerifyConfig cfg{300.0, 20.0, 1};
    const Position own{0, 0};
    SimTime t = 0;
    process_beacon(table, own, beacon(5, 100, 0), t, cfg);
    int rejected = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        t += kMicrosPerSecond;
        const Position anchor = table[5].position;
        const double jump = 2.0 * cfg.max_speed; // 40 m in 1 s
        const double x = (anchor.x + jump <= 280.0) ? anchor.x + jump : anchor.x - jump;
        if (!beacon_accepted(process_beacon(table, own, beacon(5, x, 0), t, cfg))) ++rejected;
        t += kMicrosPerSecond;
        REQUIRE(beacon_accepted(
            process_beacon(table, own, beacon(5, anchor.x, anchor.y), t, cfg)));
    }
    CHECK(rejected == n);
}

TEST_CASE("trust never increases through verification") {
    NeighborTable table;
    VerifyConfig cfg{300.0, 20.0, 1};
    const Position own{0, 0};
    table[6] = NeighborEntry{6, {50, 0}, true, 0, {}, false, 7, 0};
    Rng rng(9);
    SimTime t = 0;
    int last = 7;
    for (int i = 0; i < 500; ++i) {
        t += kMicrosPerSecond;
        const bool cheat = rng.chance(0.3);
        const Position prev = table[6].position;
        const double dx = cheat ? 60.0 : 10.0;
        process_beacon(table, own, beacon(6, std::min(prev.x + dx, 280.0), 0), t, cfg);
        REQUIRE(table[6].trust_value <= last);
        last = table[6].trust_value;
    }
    CHECK(table[6].trust_value >= 0);
}

TEST_CASE("no entry ever stores a position whose acceptance distance exceeded T") {
    NeighborTable table;
    VerifyConfig cfg{300.0, 20.0, 1};
    const Position own{0, 0};
    Rng rng(33);
    SimTime t = 0;
    for (int i = 0; i < 2000; ++i) {
        t += kMicrosPerSecond / 2;
        const NodeId who = static_cast<NodeId>(rng.uniform_u64(8));
        const Position claim{rng.uniform_range(-200, 500), rng.uniform_range(-200, 500)};
        process_beacon(table, own, beacon(who, claim.x, claim.y), t, cfg);
        for (const auto& [id, e] : table) {
            if (e.has_position) REQUIRE(distance(own, e.position) <= cfg.range_threshold);
        }
    }
}

TEST_CASE("handshake distance bound arithmetic") {
    // d = 2 us -> bound = 1 us * 300 m/us = 300 m
    CHECK(handshake_distance_bound(0, 2) == doctest::Approx(300.0));
    CHECK(handshake_distance_bound(100, 102) == doctest::Approx(300.0));
    // claims: 250 admitted, 400 rejected
    CHECK(250.0 <= handshake_distance_bound(0, 2));
    CHECK_FALSE(400.0 <= handshake_distance_bound(0, 2));
    // degenerate d = 0: bound 0, any nonzero claim rejected
    CHECK(handshake_distance_bound(5, 5) == 0.0);
    CHECK_FALSE(1.0 <= handshake_distance_bound(5, 5));
    // relay-induced extra 2 us on a 300 m link: d = 4 us -> bound 600 m
    CHECK(handshake_distance_bound(0, 4) == doctest::Approx(600.0));
}

TEST_SUITE_END();
