#include "modequest/sampler.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace modequest {

namespace {

int community_of(std::span<const std::int64_t> cumulative, std::int64_t individual) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), individual);
    return static_cast<int>(it - cumulative.begin());
}

std::vector<std::int64_t> prefix_sums(const Instance& instance) {
    std::vector<std::int64_t> cum(instance.sizes.size());
    std::int64_t acc = 0;
    for (std::size_t j = 0; j < instance.sizes.size(); ++j) {
        acc += instance.sizes[j];
        cum[j] = acc;
    }
    return cum;
}

}  // namespace

Observation sample_identityless(const Instance& instance, RngStream& rng) {
    auto cum = prefix_sums(instance);
    std::int64_t u = rng.uniform_below(cum.back());
    return Observation{community_of(cum, u), std::nullopt};
}

IdentityBasedSampler::IdentityBasedSampler(const Instance& instance)
    : cumulative_(prefix_sums(instance)),
      seen_(static_cast<std::size_t>(instance.total()), 0),
      population_(instance.total()) {}

Observation IdentityBasedSampler::next(ObservationState& state, RngStream& rng) {
    std::int64_t u = rng.uniform_below(population_);
    bool fresh = !seen_[static_cast<std::size_t>(u)];
    seen_[static_cast<std::size_t>(u)] = 1;
    Observation obs{community_of(cumulative_, u), fresh};
    state.record(obs.community, obs.fresh);
    return obs;
}

void write_trace_csv(std::ostream& out, std::span<const Observation> trace) {
    out << "t,community,fresh\n";
    std::int64_t t = 0;
    for (const auto& obs : trace) {
        out << ++t << ',' << obs.community + 1 << ',';
        if (obs.fresh) out << (*obs.fresh ? 1 : 0);
        out << '\n';
    }
}

std::vector<Observation> read_trace_csv(std::istream& in) {
    std::vector<Observation> trace;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t,", 0) == 0) continue;  // header
        }
        std::istringstream row(line);
        std::string t_field, community_field, fresh_field;
        std::getline(row, t_field, ',');
        std::getline(row, community_field, ',');
        std::getline(row, fresh_field, ',');
        Observation obs;
        obs.community = std::stoi(community_field) - 1;
        if (obs.community < 0) {
            throw std::invalid_argument("trace communities must be 1-indexed");
        }
        if (!fresh_field.empty()) {
            obs.fresh = (std::stoi(fresh_field) != 0);
        }
        trace.push_back(obs);
    }
    return trace;
}

}  // namespace modequest
