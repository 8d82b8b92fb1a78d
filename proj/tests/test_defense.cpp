#include "doctest.h"
#include "manet/defense.hpp"
#include "manet/rng.hpp"

using namespace manet;

TEST_SUITE_BEGIN("defense");

TEST_CASE("dropper forward decision at the extremes") {
    Rng rng(4);
    AdversaryProfile always{0, AdversaryProfile::Kind::Dropper, 1.0, {}};
    AdversaryProfile never{0, AdversaryProfile::Kind::Dropper, 0.0, {}};
    for (int i = 0; i < 200; ++i) {
        REQUIRE_FALSE(adversary_forwards(always, rng));
        REQUIRE(adversary_forwards(never, rng));
    }
}

TEST_CASE("dropper at p = 0.5: binomial interval over 1e3 packets") {
    Rng rng(12);
    AdversaryProfile half{0, AdversaryProfile::Kind::Dropper, 0.5, {}};
    int dropped = 0;
    for (int i = 0; i < 1000; ++i)
        if (!adversary_forwards(half, rng)) ++dropped;
    CHECK(dropped >= 435);
    CHECK(dropped <= 565);
}

TEST_CASE("sybil profiles always forward") {
    Rng rng(4);
    AdversaryProfile sybil{0, AdversaryProfile::Kind::Sybil, 0.0, {500, 500}};
    for (int i = 0; i < 50; ++i) REQUIRE(adversary_forwards(sybil, rng));
}

TEST_CASE("watchdog: forward before the deadline clears the entry") {
    Watchdog wd(50000, 3);
    const PacketKey p{1, 1, 1, 1};
    wd.observe_receive(7, p, 1000);
    CHECK(wd.pending_count() == 1);
    CHECK(wd.observe_forward(7, p));
    CHECK(wd.pending_count() == 0);
    CHECK_FALSE(wd.expire(7, p, 60000)); // nothing left to expire
    CHECK(wd.failure_rate(7) == 0);
}

TEST_CASE("watchdog: deadline passes, failure rate increments") {
    Watchdog wd(50000, 3);
    const PacketKey p{1, 1, 1, 2};
    const SimTime deadline = wd.observe_receive(7, p, 1000);
    CHECK(deadline == 51000);
    CHECK_FALSE(wd.expire(7, p, 50999)); // early check leaves it pending
    CHECK(wd.pending_count() == 1);
    CHECK(wd.expire(7, p, 51000));
    CHECK(wd.failure_rate(7) == 1);

    const PacketKey q{1, 1, 1, 3};
    wd.observe_receive(7, q, 2000);
    CHECK(wd.expire(7, q, 99999));
    CHECK(wd.failure_rate(7) == 2);
}

TEST_CASE("watchdog: unmatched forward is ignored") {
    Watchdog wd(50000, 3);
    CHECK_FALSE(wd.observe_forward(9, PacketKey{1, 2, 3, 4}));
    CHECK(wd.failure_rate(9) == 0);
}

TEST_CASE("flag threshold boundary") {
    Watchdog wd(1000, 3);
    for (std::uint64_t i = 0; i < 3; ++i) {
        CHECK_FALSE(wd.is_misbehaving(5));
        const PacketKey p{1, 1, 1, i};
        wd.observe_receive(5, p, i * 10000);
        wd.expire(5, p, i * 10000 + 1000);
    }
    CHECK(wd.failure_rate(5) == 3);
    CHECK(wd.is_misbehaving(5)); // rate == theta flags
    CHECK_FALSE(wd.is_misbehaving(6));
}

TEST_CASE("path selector gate") {
    Watchdog wd(1000, 2);
    const PacketKey a{1, 1, 1, 1};
    const PacketKey b{1, 1, 1, 2};
    wd.observe_receive(3, a, 0);
    wd.expire(3, a, 1000);
    CHECK(pathselector_check(wd, true, 3) == PathSelectorVerdict::Allow);
    wd.observe_receive(3, b, 2000);
    wd.expire(3, b, 3000);
    CHECK(pathselector_check(wd, true, 3) == PathSelectorVerdict::Deny);
    CHECK(pathselector_check(wd, true, 4) == PathSelectorVerdict::Allow);
    CHECK(pathselector_check(wd, false, 0) == PathSelectorVerdict::AllowUnknown);
}

TEST_SUITE_END();
