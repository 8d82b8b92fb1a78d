#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "manet/core.hpp"
#include "manet/hash.hpp"
#include "manet/keytoken.hpp"
#include "manet/rng.hpp"

using namespace manet;

TEST_SUITE_BEGIN("core");

TEST_CASE("distance basics") {
    CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(distance({7, 2}, {7, 2}) == 0.0);
    CHECK(distance({0, 0}, {300, 0}) == doctest::Approx(300.0));
}

TEST_CASE("distance metric axioms on sampled triples") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const Position a{rng.uniform_range(0, 1000), rng.uniform_range(0, 1000)};
        const Position b{rng.uniform_range(0, 1000), rng.uniform_range(0, 1000)};
        const Position c{rng.uniform_range(0, 1000), rng.uniform_range(0, 1000)};
        const double ab = distance(a, b);
        const double ba = distance(b, a);
        const double ac = distance(a, c);
        const double cb = distance(c, b);
        REQUIRE(ab >= 0.0);
        REQUIRE(ab == ba);
        // triangle inequality within 1e-9 relative tolerance
        REQUIRE(ab <= (ac + cb) * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("hash_digest determinism") {
    const Digest a = hash_digest("");
    const Digest b = hash_digest("");
    CHECK(a == b);
    const Digest c = hash_digest("hello");
    CHECK(a != c);
    CHECK(hash_digest("hello") == c);
}

TEST_CASE("hash_digest single-byte perturbations do not collide") {
    // 1e4 random single-byte perturbations, expect 0 collisions
    Rng rng(11);
    int collisions = 0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<std::uint8_t> base(32);
        for (auto& x : base) x = static_cast<std::uint8_t>(rng.next_u64());
        std::vector<std::uint8_t> mut = base;
        const std::size_t at = rng.uniform_u64(mut.size());
        mut[at] = static_cast<std::uint8_t>(mut[at] + 1 + rng.uniform_u64(255));
        if (mut[at] == base[at]) mut[at] ^= 1;
        if (hash_digest(base) == hash_digest(mut)) ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("hash_digest birthday scan over 1e5 random inputs") {
    Rng rng(13);
    std::set<Digest> seen;
    int collisions = 0;
    for (int i = 0; i < 100000; ++i) {
        ByteWriter w;
        w.u64(rng.next_u64()).u64(rng.next_u64()).u32(static_cast<std::uint32_t>(i));
        if (!seen.insert(hash_digest(w.bytes())).second) ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("seal/open round trip and mismatch detection") {
    Rng rng(3);
    KeyToken alice = make_key_token(1, rng);
    KeyToken bob = make_key_token(2, rng);

    const std::vector<std::uint8_t> code{1, 2, 3, 4, 5, 6, 7, 8};
    const auto sealed = seal(alice.secret_part, code);

    auto opened = open(alice.public_part, sealed);
    REQUIRE(opened.has_value());
    CHECK(*opened == code);

    CHECK_FALSE(open(bob.public_part, sealed).has_value());

    // deterministic: same (secret, message) twice gives identical bytes
    CHECK(seal(alice.secret_part, code) == sealed);
}

TEST_CASE("seal/open round trip for message lengths 0..1024") {
    Rng rng(5);
    KeyToken t = make_key_token(9, rng);
    for (std::size_t len = 0; len <= 1024; len += (len < 32 ? 1 : 37)) {
        std::vector<std::uint8_t> msg(len);
        for (auto& x : msg) x = static_cast<std::uint8_t>(rng.next_u64());
        const auto opened = open(t.public_part, seal(t.secret_part, msg));
        REQUIRE(opened.has_value());
        REQUIRE(*opened == msg);
    }
}

TEST_CASE("rng determinism") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

    Rng c(43);
    bool differs = false;
    Rng a2(42);
    for (int i = 0; i < 16; ++i) differs = differs || (a2.next_u64() != c.next_u64());
    CHECK(differs);
}

TEST_CASE("rng uniform bounds") {
    Rng rng(17);
    for (int i = 0; i < 10000; ++i) {
        const auto v = rng.uniform_u64(14);
        REQUIRE(v < 14);
        const int d = rng.uniform_int(1, 12);
        REQUIRE(d >= 1);
        REQUIRE(d <= 12);
        const double u = rng.uniform_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_SUITE_END();
