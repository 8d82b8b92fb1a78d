#include <cmath>
#include <vector>

#include "doctest.h"
#include "manet/event_queue.hpp"
#include "manet/kernel.hpp"
#include "manet/mobility.hpp"

using namespace manet;

TEST_SUITE_BEGIN("kernel");

TEST_CASE("event ordering and tie-break") {
    EventQueue q;
    std::vector<int> order;
    q.schedule_at(10, [&] { order.push_back(2); });
    q.schedule_at(5, [&] { order.push_back(1); });
    q.schedule_at(10, [&] { order.push_back(3); }); // same time, later seq
    q.run_until(20);
    CHECK(order == std::vector<int>{1, 2, 3});
    CHECK(q.now() == 20);
}

TEST_CASE("empty queue advances the clock") {
    EventQueue q;
    q.run_until(1000);
    CHECK(q.now() == 1000);
}

TEST_CASE("events beyond the horizon never fire") {
    EventQueue q;
    bool fired = false;
    q.schedule_at(100, [&] { fired = true; });
    q.run_until(99);
    CHECK_FALSE(fired);
    CHECK(q.now() == 99);
}

TEST_CASE("scheduling into the past is a logic error") {
    EventQueue q;
    q.run_until(50);
    CHECK_THROWS_AS(q.schedule_at(49, [] {}), std::logic_error);
}

TEST_CASE("zero-delay events run before time advances") {
    EventQueue q;
    std::vector<SimTime> times;
    q.schedule_at(10, [&] {
        q.schedule_at(10, [&] { times.push_back(q.now()); });
    });
    q.schedule_at(11, [&] { times.push_back(q.now()); });
    q.run_until(20);
    REQUIRE(times.size() == 2);
    CHECK(times[0] == 10);
    CHECK(times[1] == 11);
}

namespace {

struct Catcher {
    std::vector<std::pair<NodeId, MessageKind>> got;
    void attach(Kernel& k) {
        k.set_delivery_sink([this](NodeId rx, const Message& m, NodeId, Channel) {
            got.emplace_back(rx, m.kind);
        });
    }
};

Message dummy_beacon(NodeId sender) {
    return make_message(MessageKind::Beacon, 0, SenderHandle::real(sender),
                        BeaconPayload{sender, {0, 0}, 1});
}

} // namespace

TEST_CASE("unit-disk boundary: exactly r delivers, beyond r does not") {
    TraceSink trace(false);
    Kernel k(Field{2000, 2000}, RadioModel{300}, 1, &trace);
    const NodeId a = k.add_node({0, 0});
    k.add_node({300, 0});   // exactly r
    k.add_node({300.1, 0}); // beyond
    Catcher c;
    c.attach(k);
    k.broadcast(a, dummy_beacon(a));
    k.run_until(10);
    REQUIRE(c.got.size() == 1);
    CHECK(c.got[0].first == 1);
}

TEST_CASE("propagation delay: 300 m arrives after exactly 1 microsecond") {
    TraceSink trace(false);
    Kernel k(Field{2000, 2000}, RadioModel{300}, 1, &trace);
    const NodeId a = k.add_node({0, 0});
    k.add_node({300, 0});
    SimTime arrival = 0;
    k.set_delivery_sink([&](NodeId, const Message&, NodeId, Channel) { arrival = k.now(); });
    k.schedule_at(5, [&] { k.broadcast(a, dummy_beacon(a)); });
    k.run_until(100);
    CHECK(arrival == 6); // 300 m / (300 m/us) = 1 us
    CHECK(RadioModel{300}.propagation_delay(150.0) == 1);
    CHECK(RadioModel{300}.propagation_delay(301.0) == 2);
}

TEST_CASE("unit-disk fidelity against a brute-force scan") {
    TraceSink trace(false);
    Kernel k(Field{1000, 1000}, RadioModel{250}, 99, &trace);
    Rng rng(123);
    const int n = 60;
    for (int i = 0; i < n; ++i)
        k.add_node({rng.uniform_range(0, 1000), rng.uniform_range(0, 1000)});

    std::vector<NodeId> delivered;
    k.set_delivery_sink(
        [&](NodeId rx, const Message&, NodeId, Channel) { delivered.push_back(rx); });

    for (NodeId s = 0; s < n; s += 7) {
        delivered.clear();
        k.broadcast(s, dummy_beacon(s));
        k.run_until(k.now() + 10);

        std::vector<NodeId> expect;
        for (NodeId v = 0; v < n; ++v) {
            if (v == s) continue;
            if (distance(k.position(s), k.position(v)) <= 250.0) expect.push_back(v);
        }
        std::sort(delivered.begin(), delivered.end());
        REQUIRE(delivered == expect);
    }
}

TEST_CASE("unicast requires range; loss is silent") {
    TraceSink trace(false);
    Kernel k(Field{2000, 2000}, RadioModel{300}, 1, &trace);
    const NodeId a = k.add_node({0, 0});
    const NodeId b = k.add_node({600, 0});
    Catcher c;
    c.attach(k);
    k.unicast(a, b, dummy_beacon(a));
    k.run_until(10);
    CHECK(c.got.empty());
}

TEST_CASE("dead nodes neither send nor receive") {
    TraceSink trace(false);
    Kernel k(Field{2000, 2000}, RadioModel{300}, 1, &trace);
    const NodeId a = k.add_node({0, 0});
    const NodeId b = k.add_node({100, 0});
    Catcher c;
    c.attach(k);
    k.kill(b);
    k.broadcast(a, dummy_beacon(a));
    k.run_until(10);
    CHECK(c.got.empty());
    k.kill(a);
    k.broadcast(a, dummy_beacon(a));
    k.run_until(20);
    CHECK(c.got.empty());
}

TEST_CASE("mobility: velocity advance and stationary node") {
    Field f{1000, 1000};
    Position p{100, 100};
    MobilityState st;
    st.mode = MobilityState::Mode::Scripted;
    st.script.push_back(ScriptedMove{0, 2000000, 10, 0});
    Rng rng(1);
    step_node_mobility(p, st, 1.0, 0, f, rng);
    CHECK(p.x == doctest::Approx(110.0));
    CHECK(p.y == doctest::Approx(100.0));

    Position q{5, 5};
    MobilityState stay; // static
    step_node_mobility(q, stay, 1.0, 0, f, rng);
    CHECK(q.x == 5.0);
    CHECK(q.y == 5.0);
}

TEST_CASE("reflection matches a fine-substep oracle") {
    // oracle: integrate with tiny steps and single-bounce handling
    auto oracle = [](Position p, double vx, double vy, double dt, const Field& f) {
        const int steps = 20000;
        const double h = dt / steps;
        for (int i = 0; i < steps; ++i) {
            p.x += vx * h;
            p.y += vy * h;
            if (p.x < 0) { p.x = -p.x; vx = -vx; }
            if (p.x > f.width) { p.x = 2 * f.width - p.x; vx = -vx; }
            if (p.y < 0) { p.y = -p.y; vy = -vy; }
            if (p.y > f.height) { p.y = 2 * f.height - p.y; vy = -vy; }
        }
        return p;
    };

    Field f{500, 300};
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        Position p{rng.uniform_range(0, 500), rng.uniform_range(0, 300)};
        double vx = rng.uniform_range(-80, 80);
        double vy = rng.uniform_range(-80, 80);
        const double dt = rng.uniform_range(0.1, 30.0); // long enough for multiple bounces
        Position expect = oracle(p, vx, vy, dt, f);
        Position got = p;
        double gx = vx;
        double gy = vy;
        reflect_advance(got, gx, gy, dt, f);
        REQUIRE(got.x == doctest::Approx(expect.x).epsilon(1e-6));
        REQUIRE(got.y == doctest::Approx(expect.y).epsilon(1e-6));
        REQUIRE(f.contains(got));
    }
}

TEST_CASE("waypoint mobility: speed never exceeds max_speed, stays in field") {
    Field f{800, 600};
    Rng rng(77);
    Position p{400, 300};
    MobilityState st;
    st.mode = MobilityState::Mode::Waypoint;
    st.speed_min = 2.0;
    st.speed_max = 15.0;
    const double dt = 0.1;
    for (int i = 0; i < 5000; ++i) {
        const Position before = p;
        step_node_mobility(p, st, dt, 0, f, rng);
        REQUIRE(f.contains(p));
        REQUIRE(distance(before, p) <= 15.0 * dt + 1e-9);
    }
}

TEST_CASE("kernel determinism: same seed, byte-identical traces") {
    auto run_once = [] {
        TraceSink trace(true);
        Kernel k(Field{1000, 1000}, RadioModel{300}, 2024, &trace);
        Rng setup(5);
        for (int i = 0; i < 20; ++i)
            k.add_node({setup.uniform_range(0, 1000), setup.uniform_range(0, 1000)});
        int budget = 300; // bounded rebroadcast cascade
        k.set_delivery_sink([&](NodeId rx, const Message& m, NodeId, Channel) {
            k.trace().record(k.now(), "rx", rx).kv("kind", kind_name(m.kind));
            if (budget > 0 && k.rng().chance(0.5)) {
                --budget;
                k.broadcast(rx, dummy_beacon(rx));
            }
        });
        k.broadcast(0, dummy_beacon(0));
        k.run_until(10000);
        return trace.text();
    };
    CHECK(run_once() == run_once());
}

TEST_SUITE_END();
