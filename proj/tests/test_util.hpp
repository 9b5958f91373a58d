#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "modequest/core.hpp"
#include "modequest/rng.hpp"

namespace modequest::testutil {

/// Random count-vector state: t draws assigned to uniform communities.
inline ObservationState random_count_state(RngStream& rng, int k, std::int64_t max_t) {
    const std::int64_t t = 1 + rng.uniform_below(max_t);
    std::vector<std::int64_t> counts(k, 0);
    for (std::int64_t i = 0; i < t; ++i) {
        ++counts[rng.uniform_below(k)];
    }
    return ObservationState::from_counts(std::move(counts));
}

struct ActiveState {
    ObservationState state;
    std::int64_t t = 0;
};

/// Random identity-based state past the activation boundary:
/// S_j in [0, max_s] with at least one positive,
/// t = sum_j S_j + K^(t) + jitter, jitter in [1, max_jitter].
/// max_jitter <= 0 scales the jitter with the state (<= max(3, 2 sum S)),
/// which keeps gamma0 well inside a uniform scan grid.
inline ActiveState random_active_state(RngStream& rng, int k, std::int64_t max_s,
                                       std::int64_t max_jitter) {
    std::vector<std::int64_t> distinct(k, 0);
    std::int64_t total = 0;
    while (total == 0) {
        total = 0;
        for (auto& s : distinct) {
            s = rng.uniform_below(max_s + 1);
            total += s;
        }
    }
    int observed = 0;
    for (auto s : distinct) observed += (s > 0);
    const std::int64_t boundary = total + observed;
    if (max_jitter <= 0) max_jitter = std::max<std::int64_t>(3, 2 * total);
    const std::int64_t t = boundary + 1 + rng.uniform_below(max_jitter);
    return {ObservationState::from_distinct(std::move(distinct), t), t};
}

/// Equality up to tie-breaking noise: mathematically tied pairs can differ
/// by a few ulps when evaluated through different expression orders.
inline bool near_equal(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace modequest::testutil
