#include "modequest/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace modequest {

std::int64_t Instance::total() const {
    return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0});
}

double Instance::prob(int j) const {
    return static_cast<double>(sizes[j]) / static_cast<double>(total());
}

int Instance::mode() const {
    return static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
}

std::int64_t Instance::largest() const {
    return *std::max_element(sizes.begin(), sizes.end());
}

std::int64_t Instance::second_largest() const {
    std::int64_t best = 0, second = 0;
    for (auto d : sizes) {
        if (d > best) {
            second = best;
            best = d;
        } else if (d > second) {
            second = d;
        }
    }
    return second;
}

Instance make_instance(std::vector<std::int64_t> sizes, std::string name) {
    if (sizes.size() < 2) {
        throw std::invalid_argument("instance needs at least two communities");
    }
    for (auto d : sizes) {
        if (d < 1) {
            throw std::invalid_argument("community sizes must be positive");
        }
    }
    std::int64_t best = 0;
    int best_count = 0;
    for (auto d : sizes) {
        if (d > best) {
            best = d;
            best_count = 1;
        } else if (d == best) {
            ++best_count;
        }
    }
    if (best_count != 1) {
        throw std::invalid_argument("tied maximum: ground-truth mode is ambiguous");
    }
    Instance inst;
    inst.sizes = std::move(sizes);
    inst.name = std::move(name);
    return inst;
}

Instance scale_instance(const Instance& base, std::int64_t omega) {
    if (omega < 1) {
        throw std::invalid_argument("omega must be >= 1");
    }
    std::vector<std::int64_t> sizes = base.sizes;
    for (auto& d : sizes) d *= omega;
    std::string name = base.name;
    if (omega > 1 && !name.empty()) {
        name += "x" + std::to_string(omega);
    }
    return make_instance(std::move(sizes), std::move(name));
}

Instance instance_from_json(const nlohmann::json& j) {
    std::vector<std::int64_t> sizes = j.at("sizes").get<std::vector<std::int64_t>>();
    std::string name = j.value("name", std::string{});
    return make_instance(std::move(sizes), std::move(name));
}

nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["sizes"] = inst.sizes;
    if (!inst.name.empty()) j["name"] = inst.name;
    return j;
}

PriorSpec PriorSpec::geometric(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::invalid_argument("geometric parameter must lie in (0,1)");
    }
    PriorSpec spec;
    spec.kind = Kind::Geometric;
    spec.q = q;
    return spec;
}

double prior_pmf(const PriorSpec& spec, std::int64_t i) {
    if (i < 0) {
        throw std::invalid_argument("prior pmf argument must be >= 0");
    }
    switch (spec.kind) {
        case PriorSpec::Kind::Geometric:
            return spec.q * std::pow(1.0 - spec.q, static_cast<double>(i));
    }
    throw std::logic_error("unknown prior kind");
}

double prior_log_pmf(const PriorSpec& spec, std::int64_t i) {
    if (i < 0) {
        throw std::invalid_argument("prior pmf argument must be >= 0");
    }
    switch (spec.kind) {
        case PriorSpec::Kind::Geometric:
            return std::log(spec.q) + static_cast<double>(i) * std::log1p(-spec.q);
    }
    throw std::logic_error("unknown prior kind");
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::NiMe: return "ni-me";
        case Algorithm::NiMe1v1: return "ni-me-1v1";
        case Algorithm::IbCme: return "ib-cme";
        case Algorithm::IbCme1v1: return "ib-cme-1v1";
    }
    return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "ni-me") return Algorithm::NiMe;
    if (name == "ni-me-1v1") return Algorithm::NiMe1v1;
    if (name == "ib-cme") return Algorithm::IbCme;
    if (name == "ib-cme-1v1") return Algorithm::IbCme1v1;
    throw std::invalid_argument("unknown algorithm: " + name);
}

ObservationState ObservationState::from_counts(std::vector<std::int64_t> counts) {
    ObservationState s;
    s.t_ = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    s.distinct_.assign(counts.size(), 0);
    s.counts_ = std::move(counts);
    return s;
}

ObservationState ObservationState::from_distinct(std::vector<std::int64_t> distinct,
                                                 std::int64_t t) {
    std::int64_t total = std::accumulate(distinct.begin(), distinct.end(), std::int64_t{0});
    if (t < total) {
        throw std::invalid_argument("epoch count below total distinct count");
    }
    ObservationState s;
    s.t_ = t;
    s.counts_ = distinct;
    s.distinct_ = std::move(distinct);
    // attribute the collisions to the first observed community so that
    // sum_i N_i(t) = t holds for the synthetic state
    for (auto& c : s.counts_) {
        if (c > 0 || &c == &s.counts_.back()) {
            c += t - total;
            break;
        }
    }
    return s;
}

std::int64_t ObservationState::distinct_total() const {
    return std::accumulate(distinct_.begin(), distinct_.end(), std::int64_t{0});
}

int ObservationState::observed_communities() const {
    int n = 0;
    for (auto s : distinct_) n += (s > 0);
    return n;
}

void ObservationState::record(int community, std::optional<bool> fresh) {
    assert(community >= 0 && community < k());
    ++t_;
    ++counts_[community];
    if (fresh && *fresh) {
        ++distinct_[community];
    }
    assert(std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0}) == t_);
    assert(distinct_[community] <= counts_[community]);
}

std::pair<int, int> top_two(std::span<const std::int64_t> values) {
    assert(values.size() >= 2);
    int a = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[i] > values[a]) a = i;
    }
    int b = (a == 0) ? 1 : 0;
    for (int i = 0; i < static_cast<int>(values.size()); ++i) {
        if (i != a && values[i] > values[b]) b = i;
    }
    return {a, b};
}

}  // namespace modequest
