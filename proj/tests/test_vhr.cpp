#include <set>

#include "doctest.h"
#include "manet/rng.hpp"
#include "manet/vhr.hpp"

using namespace manet;

TEST_SUITE_BEGIN("vhr");

TEST_CASE("vhr_center is deterministic and inside the field") {
    const Position a = vhr_center(17, 1000, 800);
    const Position b = vhr_center(17, 1000, 800);
    CHECK(a == b);
    for (NodeId id = 0; id < 1000; ++id) {
        const Position c = vhr_center(id, 1000, 800);
        REQUIRE(c.x >= 0.0);
        REQUIRE(c.x < 1000.0);
        REQUIRE(c.y >= 0.0);
        REQUIRE(c.y < 800.0);
    }
}

TEST_CASE("vhr_center spreads near-uniformly (chi-square, 10x10 grid)") {
    // 1e3 ids over 100 cells; upper 1% critical value for 99 dof is 134.642
    const int n = 1000;
    int cells[10][10] = {};
    for (NodeId id = 0; id < n; ++id) {
        const Position c = vhr_center(id, 1000, 1000);
        cells[static_cast<int>(c.x / 100)][static_cast<int>(c.y / 100)] += 1;
    }
    const double expected = n / 100.0;
    double chi2 = 0.0;
    for (auto& row : cells)
        for (int count : row) chi2 += (count - expected) * (count - expected) / expected;
    CHECK(chi2 < 134.642);
}

TEST_CASE("server records: update, lookup, verbatim reply fields") {
    ServerRecords rec;
    rec.apply_update(PosUpdatePayload{4, {100, 200}, 5000000, 0xdeadbeef});
    auto r = rec.lookup(4);
    REQUIRE(r.has_value());
    CHECK(r->pos == Position{100, 200});
    CHECK(r->update_time == 5000000);
    CHECK(r->auth_code == 0xdeadbeef);
    CHECK_FALSE(rec.lookup(5).has_value());
}

TEST_CASE("mobility notice overwrites position, preserves the auth code") {
    ServerRecords rec;
    rec.apply_update(PosUpdatePayload{7, {0, 0}, 100, 42});
    rec.apply_mobility_notice(7, {500, 500}, 200);
    auto r = rec.lookup(7);
    REQUIRE(r.has_value());
    CHECK(r->pos == Position{500, 500});
    CHECK(r->auth_code == 42);
    CHECK(r->update_time == 200);

    // last writer wins by update_time
    rec.apply_mobility_notice(7, {600, 600}, 300);
    rec.apply_mobility_notice(7, {1, 1}, 250); // stale, ignored
    CHECK(rec.lookup(7)->pos == Position{600, 600});

    // unknown node: record created
    rec.apply_mobility_notice(9, {10, 20}, 400);
    REQUIRE(rec.lookup(9).has_value());
    CHECK(rec.lookup(9)->pos == Position{10, 20});
}

TEST_CASE("resolve_position picks the nearest record within tolerance") {
    ServerRecords rec;
    rec.apply_update(PosUpdatePayload{1, {100, 100}, 1, 1});
    rec.apply_update(PosUpdatePayload{2, {160, 100}, 1, 2});
    auto hit = rec.resolve_position({110, 100}, 60);
    REQUIRE(hit.has_value());
    CHECK(*hit == 1);
    CHECK_FALSE(rec.resolve_position({400, 400}, 60).has_value());
}

TEST_CASE("fresh auth codes: repeat draws do not repeat") {
    Rng rng(6);
    std::set<std::uint64_t> codes;
    for (int i = 0; i < 1000; ++i) REQUIRE(codes.insert(rng.next_u64()).second);
}

TEST_SUITE_END();
