#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "modequest/bench.hpp"

using namespace modequest;

TEST_CASE("builtin instances carry the benchmark size vectors") {
    CHECK(builtin_instance("I1").sizes == std::vector<std::int64_t>{20, 12, 8, 5, 5});
    CHECK(builtin_instance("I2").sizes == std::vector<std::int64_t>{20, 16, 6, 4, 4});
    const Instance i3 = builtin_instance("I3", 5);
    CHECK(i3.sizes == std::vector<std::int64_t>{100, 90, 30, 15, 15});
    CHECK(i3.total() == 250);
    CHECK(builtin_instance("dataset1").k() == 14);
    CHECK(builtin_instance("dataset1").total() == 179);
    CHECK(builtin_instance("dataset2").k() == 12);
    CHECK(builtin_instance("dataset2").total() == 500);
    CHECK(builtin_instance("dataset3").k() == 14);
    CHECK(builtin_instance("dataset3").total() == 1000);
    CHECK_THROWS_AS(builtin_instance("I9"), std::invalid_argument);
    CHECK(builtin_instances().size() == 6);
}

namespace {

BenchConfig small_config() {
    BenchConfig config;
    config.instance = make_instance({6, 3, 1}, "demo");
    config.algorithms = {{Algorithm::NiMe1v1},
                         {Algorithm::IbCme1v1, 1, PriorSpec::geometric(0.1)}};
    config.delta = 0.2;
    config.runs = 8;
    config.seed = 7;
    return config;
}

}  // namespace

TEST_CASE("single-run summary equals the trial itself") {
    BenchConfig config = small_config();
    config.runs = 1;
    const BenchSummary summary = bench(config);
    REQUIRE(summary.per_algorithm.size() == 2);
    for (const auto& algo : summary.per_algorithm) {
        REQUIRE(algo.trials.size() == 1);
        CHECK(algo.mean_tau ==
              static_cast<double>(algo.trials.front().stopping_time));
        CHECK(algo.stddev_tau == doctest::Approx(0.0));
        CHECK(algo.min_tau == algo.max_tau);
    }
}

TEST_CASE("benchmark output is byte-identical across repeats and thread counts") {
    BenchConfig config = small_config();
    std::ostringstream first_jsonl, second_jsonl, parallel_jsonl;
    const BenchSummary first = bench(config, &first_jsonl);
    const BenchSummary second = bench(config, &second_jsonl);
    config.jobs = 4;
    const BenchSummary parallel = bench(config, &parallel_jsonl);

    CHECK(first_jsonl.str() == second_jsonl.str());
    CHECK(first_jsonl.str() == parallel_jsonl.str());

    std::ostringstream csv_a, csv_b;
    write_summary_csv(csv_a, first);
    write_summary_csv(csv_b, parallel);
    CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("summary means recompute from the emitted trial lines") {
    BenchConfig config = small_config();
    std::ostringstream jsonl;
    const BenchSummary summary = bench(config, &jsonl);

    std::istringstream lines(jsonl.str());
    std::string line;
    std::map<std::string, std::vector<double>> taus;
    while (std::getline(lines, line)) {
        const auto parsed = nlohmann::json::parse(line);
        taus[parsed["algorithm"].get<std::string>()].push_back(
            parsed["stopping_time"].get<double>());
    }
    REQUIRE(taus.size() == 2);
    for (const auto& algo : summary.per_algorithm) {
        const auto& list = taus[algo.algorithm.substr(0, algo.algorithm.find('('))];
        REQUIRE(list.size() == static_cast<std::size_t>(config.runs));
        double sum = 0.0;
        for (double tau : list) sum += tau;
        CHECK(algo.mean_tau == sum / static_cast<double>(config.runs));
    }
}

TEST_CASE("identity information beats the pairwise rule on the hard instance") {
    BenchConfig config;
    config.instance = builtin_instance("I2");
    config.algorithms = {{Algorithm::IbCme, 1, PriorSpec::geometric(0.1)},
                         {Algorithm::NiMe1v1}};
    config.delta = 0.1;
    config.runs = 40;
    config.seed = 17;
    config.jobs = 2;
    const BenchSummary summary = bench(config);
    CHECK(summary.per_algorithm[0].mean_tau < summary.per_algorithm[1].mean_tau);
}

TEST_CASE("delta scan emits one row per algorithm per delta") {
    const Instance inst = make_instance({6, 3, 1});
    const std::vector<AlgorithmSpec> algos{{Algorithm::NiMe1v1}};
    const auto rows = scan_delta(inst, {0.2}, algos, 4, 11, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].delta == 0.2);
    CHECK(rows[0].mean_tau > 0.0);
    CHECK(rows[0].stderr_tau >= 0.0);

    std::ostringstream csv;
    write_delta_scan_csv(csv, rows);
    CHECK(csv.str().rfind("algorithm,delta,mean_tau,stderr\n", 0) == 0);
}

TEST_CASE("scale scan reports omega and population") {
    const Instance base = make_instance({4, 3, 2}, "base");
    const std::vector<AlgorithmSpec> algos{{Algorithm::NiMe1v1}};
    const auto rows = scan_scale(base, {1, 2}, algos, 0.2, 4, 13, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].omega == 1);
    CHECK(rows[0].population == 9);
    CHECK(rows[1].omega == 2);
    CHECK(rows[1].population == 18);
}
