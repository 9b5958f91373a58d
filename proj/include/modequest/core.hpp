#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace modequest {

/// A population partitioned into K communities of known sizes.
/// The simulator plays nature: algorithms only ever see observations,
/// never the sizes themselves.
struct Instance {
    std::vector<std::int64_t> sizes;
    std::string name;

    int k() const { return static_cast<int>(sizes.size()); }
    std::int64_t total() const;             // N
    double prob(int j) const;               // p_j = sizes[j] / N
    int mode() const;                       // index of the (strict) largest community
    std::int64_t largest() const;           // d_(1)
    std::int64_t second_largest() const;    // d_(2)
};

/// Validates and builds an Instance: K >= 2, every size >= 1, and a strict
/// unique maximum (anything else leaves the ground-truth mode ill-defined).
/// Throws std::invalid_argument on violation.
Instance make_instance(std::vector<std::int64_t> sizes, std::string name = "");

/// Scales every community by the factor omega (omega >= 1).
Instance scale_instance(const Instance& base, std::int64_t omega);

Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

/// Pmf theta over {0, 1, 2, ...} parameterizing the product prior on
/// community sizes. Support must include 0: the alpha-box pins d'_j = 0
/// for unobserved communities, which has to carry positive mass.
struct PriorSpec {
    enum class Kind { Geometric };
    Kind kind = Kind::Geometric;
    double q = 0.1;

    static PriorSpec geometric(double q);
};

/// theta(i); strictly positive for every i >= 0.
double prior_pmf(const PriorSpec& spec, std::int64_t i);
double prior_log_pmf(const PriorSpec& spec, std::int64_t i);

enum class Algorithm { NiMe, NiMe1v1, IbCme, IbCme1v1 };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct RunConfig {
    double delta = 0.1;
    Algorithm algorithm = Algorithm::NiMe;
    int alpha = 1;                       // box width for the T1 sum
    PriorSpec prior = PriorSpec::geometric(0.1);
    std::uint64_t seed = 1;
    std::int64_t max_epochs = 10'000'000;
    std::int64_t check_every = 1;        // statistic evaluation stride
};

/// Running observation record: epoch count, per-community sample counts
/// N_i(t) and, under identity-based sampling, distinct counts S_j(t).
class ObservationState {
  public:
    ObservationState() = default;
    explicit ObservationState(int k) : counts_(k, 0), distinct_(k, 0) {}

    /// Builds a state consistent with the given counts (t = sum of counts).
    static ObservationState from_counts(std::vector<std::int64_t> counts);
    /// Builds an identity-based state with given distinct counts at epoch t.
    static ObservationState from_distinct(std::vector<std::int64_t> distinct,
                                          std::int64_t t);

    int k() const { return static_cast<int>(counts_.size()); }
    std::int64_t t() const { return t_; }
    std::span<const std::int64_t> counts() const { return counts_; }
    std::span<const std::int64_t> distinct() const { return distinct_; }
    std::int64_t count(int j) const { return counts_[j]; }
    std::int64_t distinct_count(int j) const { return distinct_[j]; }

    std::int64_t distinct_total() const;   // sum_j S_j(t)
    int observed_communities() const;      // K^(t) = |{j : S_j(t) > 0}|

    /// Records one observation; fresh carries sigma_t under identity-based
    /// sampling and is absent under identityless sampling.
    void record(int community, std::optional<bool> fresh);

  private:
    std::int64_t t_ = 0;
    std::vector<std::int64_t> counts_;
    std::vector<std::int64_t> distinct_;
};

/// Lowest-index argmax and second argmax of a value vector.
std::pair<int, int> top_two(std::span<const std::int64_t> values);

}  // namespace modequest
