#include <cmath>
#include <sstream>

#include "doctest.h"
#include "manet/batch.hpp"
#include "manet/config.hpp"
#include "manet/metrics.hpp"
#include "manet/simulation.hpp"
#include "manet/vhr.hpp"

using namespace manet;

TEST_SUITE_BEGIN("harness");

namespace {

const char* kMinimal = R"(
[scenario]
seed = 42
duration_s = 2
[field]
width_m = 1000
height_m = 1000
[radio]
range_m = 300
[nodes]
count = 10
)";

ScenarioConfig harness_chain() {
    ScenarioConfig cfg;
    cfg.seed = 5;
    cfg.duration_s = 4.0;
    cfg.trace = true;
    cfg.field_width = 1300;
    cfg.field_height = 600;
    cfg.radio_range = 300;
    cfg.node_count = 6;
    cfg.placements[0] = {0, 0};
    cfg.placements[1] = {250, 0};
    cfg.placements[2] = {500, 0};
    cfg.placements[3] = {750, 0};
    cfg.placements[4] = {1000, 0};
    cfg.placements[5] = vhr_center(4, 1300, 600);
    cfg.servers = {5};
    cfg.knobs.region_radius = 250;
    cfg.flows.push_back(FlowSpec{0, 4, 1.0, 4, 50});
    return cfg;
}

} // namespace

TEST_CASE("minimal config parses with defaults applied") {
    const ScenarioConfig cfg = parse_config(kMinimal);
    CHECK(cfg.seed == 42);
    CHECK(cfg.node_count == 10);
    CHECK(cfg.mode == RouteMode::ShortestPath);
    CHECK(cfg.knobs.update_threshold == 50.0);
    CHECK(cfg.knobs.watchdog_flag_threshold == 3);
    CHECK(cfg.knobs.probe_tolerance == 10.0);
    CHECK(cfg.knobs.prio_slots == 4);
    CHECK(cfg.knobs.elim_slots == 12);
    CHECK(cfg.knobs.yield_slots == 14);
    CHECK(cfg.knobs.trust_floor == 3);
    CHECK(cfg.knobs.retry_budget == 3);
    CHECK(cfg.knobs.max_candidates == 3);
    CHECK(cfg.range_threshold() == 300.0); // defaults to the radio range
    CHECK(cfg.alert_threshold() == 50.0);  // defaults to U
    CHECK_FALSE(cfg.knobs.pathselector);
    CHECK_FALSE(cfg.knobs.source_auth);
}

TEST_CASE("config rejections name the problem") {
    CHECK_THROWS_WITH_AS(parse_config("[scenario]\nmode = 3\n[nodes]\ncount = 2\n"),
                         doctest::Contains("mode must be 1 or 2"), ConfigError);

    CHECK_THROWS_WITH_AS(
        parse_config("[nodes]\ncount = 5\n[adversaries]\ndropper = 99, 1.0\n"),
        doctest::Contains("unknown node 99"), ConfigError);

    CHECK_THROWS_WITH_AS(parse_config("[nodes]\ncount = 2\n[protocol]\nbogus_knob = 1\n"),
                         doctest::Contains("bogus_knob"), ConfigError);

    CHECK_THROWS_AS(parse_config("[nodes]\ncount = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("no_section = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nodes]\ncount = 2\n[traffic]\nflow = 0, 0, 1, 5, 50\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config("[nodes]\ncount = 3\n[adversaries]\ndropper = 1, 0.5\nsybil = 1, 5, 5\n"),
        ConfigError);
    CHECK_THROWS_AS(parse_config("[nodes]\ncount = 2\n[placement]\nnode = 0, 5000, 0\n"),
                    ConfigError);
}

TEST_CASE("metrics machine format: stable lines, nan marker, round trip") {
    Metrics m;
    m.delivery_ratio = 1.0;
    m.route_discovery_success = 2.0 / 3.0;
    m.mean_hops = std::nan("");
    m.chosen_path_avg_trust = 7.0;
    m.data_offered = 10;
    m.data_delivered = 10;
    m.hrep_collisions = 2;
    m.control_overhead["beacon"] = 123;
    m.control_overhead["rreq"] = 17;
    m.contention_rounds[1] = 9;
    m.contention_rounds[2] = 1;

    const std::string text = emit_metrics(m, MetricsFormat::Machine);
    CHECK(text.find("delivery_ratio = 1.000000\n") != std::string::npos);
    CHECK(text.find("mean_hops = nan") != std::string::npos);
    CHECK(text.find("control_overhead.beacon = 123") != std::string::npos);

    // the representation round-trips: parse then re-emit is identical
    const Metrics back = parse_metrics(text);
    CHECK(emit_metrics(back, MetricsFormat::Machine) == text);

    const std::string human = emit_metrics(m, MetricsFormat::Human);
    CHECK(human.find("delivery_ratio") != std::string::npos);
}

TEST_CASE("determinism: identical (config, seed) gives identical metrics and trace bytes") {
    const ScenarioConfig cfg = harness_chain();
    ScenarioResult a = run_scenario(cfg);
    ScenarioResult b = run_scenario(cfg);
    CHECK(a.metrics == b.metrics);
    CHECK(a.trace_text == b.trace_text);
    CHECK(!a.trace_text.empty());

    ScenarioResult c = run_scenario(cfg, 999); // different seed, same config
    CHECK(c.trace_text != a.trace_text);
}

TEST_CASE("trace records are time-ordered") {
    ScenarioResult r = run_scenario(harness_chain());
    std::istringstream in(r.trace_text);
    std::string line;
    long long last = -1;
    while (std::getline(in, line)) {
        REQUIRE(line.rfind("t=", 0) == 0);
        const long long t = std::stoll(line.substr(2, line.find(' ') - 2));
        REQUIRE(t >= last);
        last = t;
    }
    CHECK(last >= 0);
}

TEST_CASE("accounting closure: offered packets appear exactly once, delivered match") {
    ScenarioResult r = run_scenario(harness_chain());
    std::istringstream in(r.trace_text);
    std::string line;
    std::uint64_t tx = 0;
    std::uint64_t unroutable = 0;
    std::uint64_t delivered = 0;
    while (std::getline(in, line)) {
        if (line.find("ev=data_tx") != std::string::npos) ++tx;
        if (line.find("ev=data_unroutable") != std::string::npos) ++unroutable;
        if (line.find("ev=data_delivered") != std::string::npos) ++delivered;
    }
    CHECK(tx + unroutable == r.metrics.data_offered);
    CHECK(delivered == r.metrics.data_delivered);
    CHECK(delivered <= tx);
}

TEST_CASE("batch: parallel seed sweep equals the serial reference") {
    ScenarioConfig cfg = harness_chain();
    cfg.trace = true;
    const auto serial = run_seed_batch(cfg, 1, 8, 1);
    const auto parallel = run_seed_batch(cfg, 1, 8, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].seed == parallel[i].seed);
        REQUIRE(serial[i].metrics == parallel[i].metrics);
        REQUIRE(serial[i].trace_text == parallel[i].trace_text);
    }
    const auto summary = summarize(serial);
    CHECK(summary.runs == 8);
    CHECK(summary.mean_delivery_ratio == doctest::Approx(1.0));
}

TEST_CASE("p = 1 dropper on the only path, defenses off: zero delivery") {
    ScenarioConfig cfg = harness_chain();
    AdversaryProfile dropper;
    dropper.node = 2; // mid-chain relay
    dropper.kind = AdversaryProfile::Kind::Dropper;
    dropper.drop_p = 1.0;
    cfg.adversaries.push_back(dropper);
    ScenarioResult r = run_scenario(cfg);
    CHECK(r.metrics.discoveries_succeeded == 1); // control plane still works
    CHECK(r.metrics.data_offered == 4);
    CHECK(r.metrics.data_delivered == 0);
    CHECK(r.metrics.delivery_ratio == doctest::Approx(0.0));
}

TEST_SUITE_END();
