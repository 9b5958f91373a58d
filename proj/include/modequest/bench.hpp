#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "modequest/algorithms.hpp"
#include "modequest/bounds.hpp"
#include "modequest/core.hpp"

namespace modequest {

/// One algorithm column of a benchmark: which rule plus its parameters
/// (alpha and the prior only matter for the identity-based rules).
struct AlgorithmSpec {
    Algorithm algorithm = Algorithm::NiMe;
    int alpha = 1;
    PriorSpec prior = PriorSpec::geometric(0.1);

    std::string label() const;
    RunConfig to_run_config(double delta, std::uint64_t seed, std::int64_t max_epochs,
                            std::int64_t check_every) const;
};

struct BenchConfig {
    Instance instance;
    std::vector<AlgorithmSpec> algorithms;
    double delta = 0.1;
    int runs = 100;
    std::uint64_t seed = 1;
    std::int64_t max_epochs = 10'000'000;
    std::int64_t check_every = 1;
    int jobs = 1;
};

struct AlgorithmSummary {
    std::string algorithm;
    int alpha = 1;
    double prior_q = 0.1;
    double mean_tau = 0.0;
    double stddev_tau = 0.0;
    std::int64_t min_tau = 0;
    std::int64_t max_tau = 0;
    double error_rate = 0.0;
    int fired_identityless = 0;
    int fired_identity_based = 0;
    int capped = 0;
    std::vector<TrialResult> trials;
};

struct BenchSummary {
    std::string instance_name;
    std::vector<std::int64_t> sizes;
    double delta = 0.1;
    int runs = 0;
    std::uint64_t seed = 0;
    std::vector<AlgorithmSummary> per_algorithm;
    BoundReport bounds;
};

/// Runs every (algorithm, trial) pair with an RNG stream derived from
/// (seed, algorithm index, trial index), so results are independent of the
/// worker count. Per-trial JSON lines go to trial_jsonl when given.
BenchSummary bench(const BenchConfig& config, std::ostream* trial_jsonl = nullptr);

void write_summary_csv(std::ostream& out, const BenchSummary& summary);
extern const char* const kSummaryCsvHeader;

struct DeltaScanRow {
    std::string algorithm;
    double delta = 0.0;
    double mean_tau = 0.0;
    double stderr_tau = 0.0;
};

/// Mean stopping time against delta; one benchmark per delta value.
std::vector<DeltaScanRow> scan_delta(const Instance& instance,
                                     const std::vector<double>& deltas,
                                     const std::vector<AlgorithmSpec>& algorithms,
                                     int runs, std::uint64_t seed, int jobs,
                                     std::int64_t max_epochs = 10'000'000);
void write_delta_scan_csv(std::ostream& out, const std::vector<DeltaScanRow>& rows);

struct ScaleScanRow {
    std::int64_t omega = 1;
    std::int64_t population = 0;
    std::string algorithm;
    double mean_tau = 0.0;
};

/// Mean stopping time against the population scale factor omega.
std::vector<ScaleScanRow> scan_scale(const Instance& base,
                                     const std::vector<std::int64_t>& omegas,
                                     const std::vector<AlgorithmSpec>& algorithms,
                                     double delta, int runs, std::uint64_t seed, int jobs,
                                     std::int64_t max_epochs = 10'000'000);
void write_scale_scan_csv(std::ostream& out, const std::vector<ScaleScanRow>& rows);

/// Named instances used by the benchmark presets. "I3" takes the scale
/// factor omega; every other name ignores it.
Instance builtin_instance(const std::string& name, std::int64_t omega = 1);
std::map<std::string, Instance> builtin_instances();

}  // namespace modequest
