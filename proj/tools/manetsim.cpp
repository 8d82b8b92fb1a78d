// manetsim: scenario runner for the secure position-based anonymous
// routing simulator. Subcommands: run, validate, version.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "manet/batch.hpp"
#include "manet/config.hpp"
#include "manet/simulation.hpp"
#include "manet/trace.hpp"
#include "manet/version.hpp"

namespace {

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string trace = "default"; // on|off|default (config decides)
    std::string seeds_range;       // "A..B" batch mode
    int jobs = 1;
    std::string metrics_format = "machine";
};

bool parse_seed_range(const std::string& s, std::uint64_t& first, std::uint64_t& last) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) return false;
    try {
        first = std::stoull(s.substr(0, dots));
        last = std::stoull(s.substr(dots + 2));
    } catch (...) {
        return false;
    }
    return last >= first;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

int cmd_run(const RunOptions& opt) {
    manet::ScenarioConfig cfg = manet::load_config_file(opt.config_path);
    if (opt.trace == "on") cfg.trace = true;
    if (opt.trace == "off") cfg.trace = false;
    if (!opt.out_dir.empty()) {
        std::filesystem::create_directories(opt.out_dir);
        if (opt.trace == "default") cfg.trace = true;
    }
    const auto fmt = opt.metrics_format == "human" ? manet::MetricsFormat::Human
                                                   : manet::MetricsFormat::Machine;

    if (!opt.seeds_range.empty()) {
        std::uint64_t first = 0;
        std::uint64_t last = 0;
        if (!parse_seed_range(opt.seeds_range, first, last)) {
            std::cerr << "error: --seeds expects A..B with B >= A\n";
            return 2;
        }
        const auto results = manet::run_seed_batch(cfg, first, last, opt.jobs);
        for (const auto& r : results) {
            std::cout << "# seed " << r.seed << "\n" << emit_metrics(r.metrics, fmt);
            if (!opt.out_dir.empty()) {
                const std::string base = opt.out_dir + "/seed-" + std::to_string(r.seed);
                write_file(base + ".metrics.txt",
                           emit_metrics(r.metrics, manet::MetricsFormat::Machine));
                if (cfg.trace) write_file(base + ".trace.txt", r.trace_text);
            }
        }
        const auto summary = manet::summarize(results);
        std::cout << "# batch runs=" << summary.runs
                  << " mean_delivery_ratio=" << manet::format_double(summary.mean_delivery_ratio, 6)
                  << " mean_discovery_success="
                  << manet::format_double(summary.mean_discovery_success, 6) << "\n";
        return 0;
    }

    manet::ScenarioResult r = manet::run_scenario(cfg, opt.seed);
    std::cout << emit_metrics(r.metrics, fmt);
    if (!opt.out_dir.empty()) {
        write_file(opt.out_dir + "/metrics.txt",
                   emit_metrics(r.metrics, manet::MetricsFormat::Machine));
        if (cfg.trace) write_file(opt.out_dir + "/trace.txt", r.trace_text);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secure position-based anonymous routing simulator"};
    app.require_subcommand(1);

    RunOptions opt;
    auto* run = app.add_subcommand("run", "run a scenario");
    run->add_option("--config", opt.config_path, "scenario config file")->required();
    std::uint64_t seed_value = 0;
    auto* seed_opt = run->add_option("--seed", seed_value, "override the config seed");
    run->add_option("--out", opt.out_dir, "directory for metrics/trace files");
    run->add_option("--trace", opt.trace, "trace emission: on|off")
        ->check(CLI::IsMember({"on", "off", "default"}));
    run->add_option("--seeds", opt.seeds_range, "batch over seeds A..B (isolated replicas)");
    run->add_option("--jobs", opt.jobs, "parallel replicas for --seeds (OpenMP)")
        ->check(CLI::PositiveNumber);
    run->add_option("--metrics", opt.metrics_format, "metrics format: human|machine")
        ->check(CLI::IsMember({"human", "machine"}));

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and validate a config");
    validate->add_option("--config", validate_path, "scenario config file")->required();

    auto* version = app.add_subcommand("version", "print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (seed_opt->count() > 0) opt.seed = seed_value;
            return cmd_run(opt);
        }
        if (validate->parsed()) {
            manet::load_config_file(validate_path);
            std::cout << "ok\n";
            return 0;
        }
        if (version->parsed()) {
            std::cout << "manetsim " << manet::kVersion << "\n";
            return 0;
        }
    } catch (const manet::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
