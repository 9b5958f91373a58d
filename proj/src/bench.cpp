#include "modequest/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "modequest/rng.hpp"

namespace modequest {

namespace {

// shortest round-trip decimal form, deterministic across runs
std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(std::min(jobs, n)));
    for (int w = 0; w < std::min(jobs, n); ++w) {
        workers.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    }
    for (auto& worker : workers) worker.join();
}

}  // namespace

std::string AlgorithmSpec::label() const {
    std::string label = algorithm_name(algorithm);
    if (algorithm == Algorithm::IbCme || algorithm == Algorithm::IbCme1v1) {
        label += "(alpha=" + std::to_string(alpha) + ",q=" + format_double(prior.q) + ")";
    }
    return label;
}

RunConfig AlgorithmSpec::to_run_config(double delta, std::uint64_t seed,
                                       std::int64_t max_epochs,
                                       std::int64_t check_every) const {
    RunConfig config;
    config.algorithm = algorithm;
    config.alpha = alpha;
    config.prior = prior;
    config.delta = delta;
    config.seed = seed;
    config.max_epochs = max_epochs;
    config.check_every = check_every;
    return config;
}

BenchSummary bench(const BenchConfig& config, std::ostream* trial_jsonl) {
    if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
    BenchSummary summary;
    summary.instance_name =
        config.instance.name.empty() ? "custom" : config.instance.name;
    summary.sizes = config.instance.sizes;
    summary.delta = config.delta;
    summary.runs = config.runs;
    summary.seed = config.seed;
    summary.bounds = bound_ratio_check(config.instance, config.delta);

    for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
        const AlgorithmSpec& spec = config.algorithms[ai];
        const RunConfig run_config =
            spec.to_run_config(config.delta, config.seed, config.max_epochs,
                               config.check_every);
        std::vector<TrialResult> trials(static_cast<std::size_t>(config.runs));
        parallel_for(config.runs, config.jobs, [&](int i) {
            RngStream rng(config.seed,
                          (static_cast<std::uint64_t>(ai) << 32) |
                              static_cast<std::uint64_t>(i));
            trials[static_cast<std::size_t>(i)] =
                run_trial(config.instance, run_config, rng);
        });

        AlgorithmSummary algo;
        algo.algorithm = spec.label();
        algo.alpha = spec.alpha;
        algo.prior_q = spec.prior.q;
        algo.min_tau = trials.front().stopping_time;
        algo.max_tau = trials.front().stopping_time;
        double sum = 0.0, sum_sq = 0.0;
        int errors = 0;
        for (const auto& trial : trials) {
            const double tau = static_cast<double>(trial.stopping_time);
            sum += tau;
            sum_sq += tau * tau;
            algo.min_tau = std::min(algo.min_tau, trial.stopping_time);
            algo.max_tau = std::max(algo.max_tau, trial.stopping_time);
            switch (trial.rule_fired) {
                case RuleFired::Identityless: ++algo.fired_identityless; break;
                case RuleFired::IdentityBased: ++algo.fired_identity_based; break;
                case RuleFired::MaxEpochsCap: ++algo.capped; break;
            }
            if (trial.declared_mode && trial.error) ++errors;
        }
        const double n = static_cast<double>(config.runs);
        algo.mean_tau = sum / n;
        const double var = std::max(0.0, sum_sq / n - algo.mean_tau * algo.mean_tau);
        algo.stddev_tau = std::sqrt(var);
        algo.error_rate = static_cast<double>(errors) / n;

        if (trial_jsonl) {
            for (int i = 0; i < config.runs; ++i) {
                const TrialResult& trial = trials[static_cast<std::size_t>(i)];
                nlohmann::json line;
                line["instance"] = summary.instance_name;
                line["sizes"] = config.instance.sizes;
                line["algorithm"] = algorithm_name(spec.algorithm);
                line["alpha"] = spec.alpha;
                line["prior_q"] = spec.prior.q;
                line["delta"] = config.delta;
                line["seed"] = config.seed;
                line["trial"] = i;
                line["stopping_time"] = trial.stopping_time;
                if (trial.declared_mode) {
                    line["declared_mode"] = *trial.declared_mode + 1;  // 1-indexed
                    line["error"] = trial.error;
                } else {
                    line["declared_mode"] = nullptr;
                    line["error"] = nullptr;
                }
                line["rule_fired"] = rule_name(trial.rule_fired);
                line["distinct_total"] = trial.trace_len_distinct;
                (*trial_jsonl) << line.dump() << '\n';
            }
        }
        algo.trials = std::move(trials);
        summary.per_algorithm.push_back(std::move(algo));
    }
    return summary;
}

const char* const kSummaryCsvHeader =
    "instance,algorithm,alpha,prior_q,delta,runs,mean_tau,stddev_tau,min_tau,max_tau,"
    "error_rate,fired_identityless,fired_identity_based,capped,"
    "lb_identityless,lb_identity_based";

void write_summary_csv(std::ostream& out, const BenchSummary& summary) {
    out << kSummaryCsvHeader << '\n';
    for (const auto& algo : summary.per_algorithm) {
        out << summary.instance_name << ',' << algo.algorithm << ',' << algo.alpha << ','
            << format_double(algo.prior_q) << ',' << format_double(summary.delta) << ','
            << summary.runs << ',' << format_double(algo.mean_tau) << ','
            << format_double(algo.stddev_tau) << ',' << algo.min_tau << ','
            << algo.max_tau << ',' << format_double(algo.error_rate) << ','
            << algo.fired_identityless << ',' << algo.fired_identity_based << ','
            << algo.capped << ',' << format_double(summary.bounds.lb_identityless) << ','
            << format_double(summary.bounds.lb_identity_based) << '\n';
    }
}

std::vector<DeltaScanRow> scan_delta(const Instance& instance,
                                     const std::vector<double>& deltas,
                                     const std::vector<AlgorithmSpec>& algorithms,
                                     int runs, std::uint64_t seed, int jobs,
                                     std::int64_t max_epochs) {
    std::vector<DeltaScanRow> rows;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        BenchConfig config;
        config.instance = instance;
        config.algorithms = algorithms;
        config.delta = deltas[di];
        config.runs = runs;
        config.seed = derive_seed(seed, 0xDE17A + di);
        config.jobs = jobs;
        config.max_epochs = max_epochs;
        const BenchSummary summary = bench(config);
        for (const auto& algo : summary.per_algorithm) {
            DeltaScanRow row;
            row.algorithm = algo.algorithm;
            row.delta = deltas[di];
            row.mean_tau = algo.mean_tau;
            row.stderr_tau = algo.stddev_tau / std::sqrt(static_cast<double>(runs));
            rows.push_back(row);
        }
    }
    return rows;
}

void write_delta_scan_csv(std::ostream& out, const std::vector<DeltaScanRow>& rows) {
    out << "algorithm,delta,mean_tau,stderr\n";
    for (const auto& row : rows) {
        out << row.algorithm << ',' << format_double(row.delta) << ','
            << format_double(row.mean_tau) << ',' << format_double(row.stderr_tau)
            << '\n';
    }
}

std::vector<ScaleScanRow> scan_scale(const Instance& base,
                                     const std::vector<std::int64_t>& omegas,
                                     const std::vector<AlgorithmSpec>& algorithms,
                                     double delta, int runs, std::uint64_t seed, int jobs,
                                     std::int64_t max_epochs) {
    std::vector<ScaleScanRow> rows;
    for (std::size_t oi = 0; oi < omegas.size(); ++oi) {
        const Instance scaled = scale_instance(base, omegas[oi]);
        BenchConfig config;
        config.instance = scaled;
        config.algorithms = algorithms;
        config.delta = delta;
        config.runs = runs;
        config.seed = derive_seed(seed, 0xCA1E + oi);
        config.jobs = jobs;
        config.max_epochs = max_epochs;
        const BenchSummary summary = bench(config);
        for (const auto& algo : summary.per_algorithm) {
            ScaleScanRow row;
            row.omega = omegas[oi];
            row.population = scaled.total();
            row.algorithm = algo.algorithm;
            row.mean_tau = algo.mean_tau;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_scale_scan_csv(std::ostream& out, const std::vector<ScaleScanRow>& rows) {
    out << "omega,N,algorithm,mean_tau\n";
    for (const auto& row : rows) {
        out << row.omega << ',' << row.population << ',' << row.algorithm << ','
            << format_double(row.mean_tau) << '\n';
    }
}

Instance builtin_instance(const std::string& name, std::int64_t omega) {
    if (name == "I1") return make_instance({20, 12, 8, 5, 5}, "I1");
    if (name == "I2") return make_instance({20, 16, 6, 4, 4}, "I2");
    if (name == "I3") return scale_instance(make_instance({20, 18, 6, 3, 3}, "I3"), omega);
    if (name == "dataset1") {
        return make_instance({41, 16, 3, 14, 31, 29, 5, 5, 11, 7, 2, 3, 9, 3}, "dataset1");
    }
    if (name == "dataset2") {
        return make_instance({19, 39, 14, 44, 18, 139, 13, 12, 39, 25, 20, 118},
                             "dataset2");
    }
    if (name == "dataset3") {
        return make_instance({172, 72, 82, 88, 155, 107, 289, 2, 2, 3, 11, 12, 1, 4},
                             "dataset3");
    }
    throw std::invalid_argument("unknown builtin instance: " + name);
}

std::map<std::string, Instance> builtin_instances() {
    std::map<std::string, Instance> all;
    for (const char* name :
         {"I1", "I2", "I3", "dataset1", "dataset2", "dataset3"}) {
        all.emplace(name, builtin_instance(name));
    }
    return all;
}

}  // namespace modequest
