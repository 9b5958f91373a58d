#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "modequest/algorithms.hpp"
#include "modequest/bench.hpp"
#include "modequest/bounds.hpp"
#include "modequest/ib_stats.hpp"
#include "modequest/iless_stats.hpp"
#include "modequest/oracle.hpp"
#include "modequest/sampler.hpp"

namespace mq = modequest;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_flag;
    int jobs = 1;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json config;
    in >> config;
    return config;
}

std::uint64_t resolve_seed(const CommonOpts& opts, const json& config) {
    if (opts.seed_flag) return *opts.seed_flag;
    if (config.contains("seed")) return config["seed"].get<std::uint64_t>();
    if (const char* env = std::getenv("MODE_QUEST_SEED")) {
        return std::stoull(env);
    }
    return 1;
}

mq::Instance resolve_instance(const json& config) {
    if (!config.contains("instance")) {
        throw std::runtime_error("config needs an \"instance\" entry");
    }
    const std::int64_t omega = config.value("omega", std::int64_t{1});
    const json& spec = config["instance"];
    if (spec.is_string()) {
        mq::Instance inst = mq::builtin_instance(spec.get<std::string>(), omega);
        if (omega > 1 && spec.get<std::string>() != "I3") {
            inst = mq::scale_instance(inst, omega);
        }
        return inst;
    }
    mq::Instance inst = mq::instance_from_json(spec);
    return omega > 1 ? mq::scale_instance(inst, omega) : inst;
}

mq::PriorSpec parse_prior(const json& spec) {
    if (spec.is_null()) return mq::PriorSpec::geometric(0.1);
    const std::string kind = spec.value("kind", "geometric");
    if (kind != "geometric") throw std::runtime_error("unknown prior kind: " + kind);
    return mq::PriorSpec::geometric(spec.value("q", 0.1));
}

mq::AlgorithmSpec parse_algorithm(const json& entry) {
    mq::AlgorithmSpec spec;
    spec.algorithm = mq::algorithm_from_name(entry.at("algorithm").get<std::string>());
    spec.alpha = entry.value("alpha", 1);
    spec.prior = parse_prior(entry.value("prior", json{}));
    return spec;
}

std::vector<mq::AlgorithmSpec> resolve_algorithms(const json& config) {
    std::vector<mq::AlgorithmSpec> specs;
    if (config.contains("algorithms")) {
        for (const auto& entry : config["algorithms"]) {
            specs.push_back(parse_algorithm(entry));
        }
    }
    if (specs.empty()) throw std::runtime_error("config needs an \"algorithms\" list");
    return specs;
}

std::ofstream open_out_file(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name + " under " + dir);
    return out;
}

std::vector<mq::AlgorithmSpec> preset_algorithms() {
    using A = mq::Algorithm;
    return {
        {A::IbCme1v1, 1, mq::PriorSpec::geometric(0.1)},
        {A::IbCme, 1, mq::PriorSpec::geometric(0.1)},
        {A::NiMe1v1},
        {A::NiMe},
    };
}

json trial_to_json(const mq::TrialResult& result) {
    json j;
    j["stopping_time"] = result.stopping_time;
    if (result.declared_mode) {
        j["declared_mode"] = *result.declared_mode + 1;  // 1-indexed for users
        j["error"] = result.error;
    } else {
        j["declared_mode"] = nullptr;
        j["error"] = nullptr;
    }
    j["rule_fired"] = mq::rule_name(result.rule_fired);
    j["distinct_total"] = result.trace_len_distinct;
    return j;
}

json bounds_to_json(const mq::BoundReport& report) {
    json j;
    j["g_star"] = report.g_star;
    j["lb_identityless"] = report.lb_identityless;
    j["lb_identity_based"] = report.lb_identity_based;
    j["ratio_lhs"] = report.ratio_lhs;
    j["ratio_mid"] = report.ratio_mid;
    j["ratio_lower"] = report.ratio_lower;
    j["ratio_ok"] = report.ratio_ok;
    return j;
}

int cmd_run(const CommonOpts& opts, const std::string& trace_path) {
    const json config = load_config(opts.config_path);
    const mq::Instance instance = resolve_instance(config);
    mq::AlgorithmSpec spec;
    if (config.contains("algorithms")) {
        spec = parse_algorithm(config["algorithms"].at(0));
    } else if (config.contains("algorithm")) {
        spec = parse_algorithm(config);
    } else {
        throw std::runtime_error("config needs \"algorithm\" or \"algorithms\"");
    }
    const std::uint64_t seed = resolve_seed(opts, config);
    const mq::RunConfig run_config =
        spec.to_run_config(config.value("delta", 0.1), seed,
                           config.value("max_epochs", std::int64_t{10'000'000}),
                           config.value("check_every", std::int64_t{1}));
    mq::RngStream rng(seed, 0);

    mq::TrialResult result;
    if (!trace_path.empty()) {
        // re-run with a recording sampler so the trace can be replayed offline
        std::vector<mq::Observation> trace;
        mq::RngStream rec_rng(seed, 0);
        if (spec.algorithm == mq::Algorithm::IbCme ||
            spec.algorithm == mq::Algorithm::IbCme1v1) {
            mq::ObservationState state(instance.k());
            mq::IdentityBasedSampler sampler(instance);
            result = mq::run_trial(instance, run_config, rng);
            for (std::int64_t t = 0; t < result.stopping_time; ++t) {
                trace.push_back(sampler.next(state, rec_rng));
            }
        } else {
            result = mq::run_trial(instance, run_config, rng);
            for (std::int64_t t = 0; t < result.stopping_time; ++t) {
                trace.push_back(mq::sample_identityless(instance, rec_rng));
            }
        }
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write trace: " + trace_path);
        mq::write_trace_csv(out, trace);
    } else {
        result = mq::run_trial(instance, run_config, rng);
    }

    json j = trial_to_json(result);
    j["instance"] = instance.name.empty() ? json(instance.sizes) : json(instance.name);
    j["algorithm"] = mq::algorithm_name(spec.algorithm);
    j["delta"] = run_config.delta;
    j["seed"] = seed;
    std::cout << j.dump(2) << '\n';
    if (!opts.out_dir.empty()) {
        open_out_file(opts.out_dir, "result.json") << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_bench(const CommonOpts& opts, const std::string& preset) {
    const json config = load_config(opts.config_path);
    std::vector<mq::BenchConfig> benches;
    const std::uint64_t seed = resolve_seed(opts, config);

    if (preset == "table1") {
        using A = mq::Algorithm;
        std::vector<mq::AlgorithmSpec> algos = {
            {A::NiMe},
            {A::NiMe1v1},
            {A::IbCme, 1, mq::PriorSpec::geometric(0.1)},
            {A::IbCme1v1, 1, mq::PriorSpec::geometric(0.1)},
            {A::IbCme, 1, mq::PriorSpec::geometric(0.9)},
            {A::IbCme, 3, mq::PriorSpec::geometric(0.1)},
        };
        for (const char* name : {"I1", "I2"}) {
            mq::BenchConfig bench_config;
            bench_config.instance = mq::builtin_instance(name);
            bench_config.algorithms = algos;
            bench_config.delta = 0.1;
            bench_config.runs = 100;
            bench_config.seed = mq::derive_seed(seed, name[1]);
            bench_config.jobs = opts.jobs;
            benches.push_back(std::move(bench_config));
        }
    } else if (preset == "table3") {
        for (const char* name : {"dataset1", "dataset2", "dataset3"}) {
            mq::BenchConfig bench_config;
            bench_config.instance = mq::builtin_instance(name);
            bench_config.algorithms = preset_algorithms();
            bench_config.delta = 0.1;
            bench_config.runs = 100;
            bench_config.seed = mq::derive_seed(seed, name[7]);
            bench_config.jobs = opts.jobs;
            benches.push_back(std::move(bench_config));
        }
    } else if (!preset.empty()) {
        throw std::runtime_error("bench presets: table1, table3");
    } else {
        mq::BenchConfig bench_config;
        bench_config.instance = resolve_instance(config);
        bench_config.algorithms = resolve_algorithms(config);
        bench_config.delta = config.value("delta", 0.1);
        bench_config.runs = config.value("runs", 100);
        bench_config.seed = seed;
        bench_config.max_epochs = config.value("max_epochs", std::int64_t{10'000'000});
        bench_config.check_every = config.value("check_every", std::int64_t{1});
        bench_config.jobs = opts.jobs;
        benches.push_back(std::move(bench_config));
    }

    const std::string out_dir = opts.out_dir.empty() ? "." : opts.out_dir;
    auto jsonl = open_out_file(out_dir, "trials.jsonl");
    auto csv = open_out_file(out_dir, "summary.csv");
    csv << mq::kSummaryCsvHeader << '\n';
    for (const auto& bench_config : benches) {
        const auto t0 = std::chrono::steady_clock::now();
        const mq::BenchSummary summary = mq::bench(bench_config, &jsonl);
        const auto t1 = std::chrono::steady_clock::now();
        std::ostringstream rows;
        mq::write_summary_csv(rows, summary);
        const std::string text = rows.str();
        const std::string body = text.substr(text.find('\n') + 1);
        csv << body;
        std::cout << body;
        std::cerr << "# " << summary.instance_name << ": "
                  << std::chrono::duration<double>(t1 - t0).count() << " s\n";
    }
    std::cout.flush();
    return 0;
}

int cmd_bounds(const CommonOpts& opts, const std::string& instance_name, double delta) {
    mq::Instance instance;
    if (!instance_name.empty()) {
        instance = mq::builtin_instance(instance_name);
    } else {
        const json config = load_config(opts.config_path);
        instance = resolve_instance(config);
        delta = config.value("delta", delta);
    }
    json j = bounds_to_json(mq::bound_ratio_check(instance, delta));
    j["instance"] = instance.name.empty() ? json(instance.sizes) : json(instance.name);
    j["delta"] = delta;
    std::cout << j.dump(2) << '\n';
    if (!opts.out_dir.empty()) {
        open_out_file(opts.out_dir, "bounds.json") << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_scan_delta(const CommonOpts& opts, const std::string& preset) {
    const json config = load_config(opts.config_path);
    mq::Instance instance;
    std::vector<double> deltas;
    std::vector<mq::AlgorithmSpec> algos;
    int runs = 100;
    if (preset == "figure1") {
        instance = mq::builtin_instance("I2");
        deltas = {0.1, 0.01, 0.001};
        algos = preset_algorithms();
    } else if (!preset.empty()) {
        throw std::runtime_error("scan-delta presets: figure1");
    } else {
        instance = resolve_instance(config);
        deltas = config.at("deltas").get<std::vector<double>>();
        algos = resolve_algorithms(config);
        runs = config.value("runs", 100);
    }
    const auto rows = mq::scan_delta(instance, deltas, algos, runs,
                                     resolve_seed(opts, config), opts.jobs);
    const std::string out_dir = opts.out_dir.empty() ? "." : opts.out_dir;
    auto csv = open_out_file(out_dir, "scan_delta.csv");
    mq::write_delta_scan_csv(csv, rows);
    mq::write_delta_scan_csv(std::cout, rows);
    return 0;
}

int cmd_scan_scale(const CommonOpts& opts, const std::string& preset) {
    const json config = load_config(opts.config_path);
    mq::Instance base;
    std::vector<std::int64_t> omegas;
    std::vector<mq::AlgorithmSpec> algos;
    int runs = 100;
    double delta = 0.1;
    if (preset == "table2") {
        base = mq::builtin_instance("I3");
        omegas = {1, 5, 10, 15, 20, 25, 30, 35, 40};
        algos = preset_algorithms();
    } else if (!preset.empty()) {
        throw std::runtime_error("scan-scale presets: table2");
    } else {
        base = resolve_instance(config);
        omegas = config.at("omegas").get<std::vector<std::int64_t>>();
        algos = resolve_algorithms(config);
        runs = config.value("runs", 100);
        delta = config.value("delta", 0.1);
    }
    const auto rows = mq::scan_scale(base, omegas, algos, delta, runs,
                                     resolve_seed(opts, config), opts.jobs);
    const std::string out_dir = opts.out_dir.empty() ? "." : opts.out_dir;
    auto csv = open_out_file(out_dir, "scan_scale.csv");
    mq::write_scale_scan_csv(csv, rows);
    mq::write_scale_scan_csv(std::cout, rows);
    return 0;
}

int cmd_stat(const CommonOpts& opts, const std::string& trace_path, int alpha,
             double prior_q, bool oracle_check) {
    std::ifstream in(trace_path);
    if (!in) throw std::runtime_error("cannot open trace: " + trace_path);
    const auto trace = mq::read_trace_csv(in);
    if (trace.empty()) throw std::runtime_error("empty trace");
    int k = 0;
    bool identity_based = false;
    for (const auto& obs : trace) {
        k = std::max(k, obs.community + 1);
        identity_based = identity_based || obs.fresh.has_value();
    }
    k = std::max(k, 2);
    const mq::PriorSpec prior = mq::PriorSpec::geometric(prior_q);

    std::ostream& out = std::cout;
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    mq::ObservationState state(k);
    std::int64_t t = 0;
    int mismatches = 0;
    if (identity_based) {
        out << "t,active,Y,a_tilde,b_tilde,gamma0,box_size\n";
    } else {
        out << "t,Z,Z_tilde,a_hat,b_hat\n";
    }
    for (const auto& obs : trace) {
        state.record(obs.community, obs.fresh);
        ++t;
        if (identity_based) {
            const mq::IbStatReport report = mq::y_stat(state, t, alpha, prior);
            out << t << ',' << (report.active ? 1 : 0) << ',';
            if (report.active) {
                out << report.y << ',' << report.a_tilde + 1 << ',' << report.b_tilde + 1
                    << ',' << report.gamma0 << ',' << report.box_size;
            } else {
                out << ",,,,";
            }
            out << '\n';
            if (oracle_check && report.active) {
                const auto scan = mq::oracle::dense_gamma_scan(
                    state, report.a_tilde, report.b_tilde, t, 10'000);
                if (scan.sign_changes != 1 || report.gamma0 < scan.bracket_lo ||
                    report.gamma0 > scan.bracket_hi) {
                    ++mismatches;
                    std::cerr << "oracle mismatch at t=" << t << ": gamma0 "
                              << report.gamma0 << " outside [" << scan.bracket_lo << ","
                              << scan.bracket_hi << "]\n";
                }
            }
        } else {
            const mq::IlessStatReport report = mq::z_stat(state);
            out << t << ',' << report.z << ',' << report.z_tilde << ','
                << report.a_hat + 1 << ',' << report.b_hat + 1 << '\n';
            if (oracle_check) {
                // max-min over every ordered pair must equal the report value
                double best = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < k; ++a) {
                    double worst = std::numeric_limits<double>::infinity();
                    for (int b = 0; b < k; ++b) {
                        if (b != a) worst = std::min(worst, mq::z_ab(state, a, b));
                    }
                    best = std::max(best, worst);
                }
                if (best != report.z) {
                    ++mismatches;
                    std::cerr << "oracle mismatch at t=" << t << ": Z " << report.z
                              << " vs max-min " << best << '\n';
                }
            }
        }
    }
    if (oracle_check) {
        std::cerr << "# oracle mismatches: " << mismatches << '\n';
        return mismatches == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential community-mode estimation benchmark harness"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::uint64_t seed_value = 0;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "JSON config file");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--jobs", opts.jobs, "worker threads for trials")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed_value, "master seed (overrides config)")
            ->each([&](const std::string&) { opts.seed_flag = seed_value; });
    };

    auto* run = app.add_subcommand("run", "run a single trial");
    std::string trace_path;
    run->add_option("--dump-trace", trace_path, "write the sampled trace as CSV");
    add_common(run);

    auto* bench = app.add_subcommand("bench", "Monte-Carlo benchmark");
    std::string bench_preset;
    bench->add_option("--preset", bench_preset, "table1 or table3");
    add_common(bench);

    auto* bounds = app.add_subcommand("bounds", "print lower-bound report");
    std::string bounds_instance;
    double bounds_delta = 0.1;
    bounds->add_option("--instance", bounds_instance, "builtin instance name");
    bounds->add_option("--delta", bounds_delta, "error threshold");
    add_common(bounds);

    auto* scan_delta_cmd = app.add_subcommand("scan-delta", "mean tau vs delta");
    std::string delta_preset;
    scan_delta_cmd->add_option("--preset", delta_preset, "figure1");
    add_common(scan_delta_cmd);

    auto* scan_scale_cmd = app.add_subcommand("scan-scale", "mean tau vs omega");
    std::string scale_preset;
    scan_scale_cmd->add_option("--preset", scale_preset, "table2");
    add_common(scan_scale_cmd);

    auto* stat = app.add_subcommand("stat", "recompute statistics over a trace");
    std::string stat_trace;
    int stat_alpha = 1;
    double stat_prior_q = 0.1;
    bool stat_oracle = false;
    stat->add_option("--trace", stat_trace, "trace CSV file")->required();
    stat->add_option("--alpha", stat_alpha, "box width for T1");
    stat->add_option("--prior-q", stat_prior_q, "geometric prior parameter");
    stat->add_flag("--oracle", stat_oracle, "cross-check against brute force")
        ->group("");  // hidden
    add_common(stat);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts, trace_path);
        if (bench->parsed()) return cmd_bench(opts, bench_preset);
        if (bounds->parsed()) return cmd_bounds(opts, bounds_instance, bounds_delta);
        if (scan_delta_cmd->parsed()) return cmd_scan_delta(opts, delta_preset);
        if (scan_scale_cmd->parsed()) return cmd_scan_scale(opts, scale_preset);
        if (stat->parsed()) return cmd_stat(opts, stat_trace, stat_alpha, stat_prior_q,
                                            stat_oracle);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
