#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "modequest/core.hpp"
#include "modequest/rng.hpp"

namespace modequest {

/// One sampling epoch. fresh carries sigma_t under identity-based sampling
/// and is absent under identityless sampling.
struct Observation {
    int community = 0;
    std::optional<bool> fresh;
};

/// Draws one individual uniformly at random and reveals only its community.
Observation sample_identityless(const Instance& instance, RngStream& rng);

/// Identity-based observation stream. Each draw picks an individual
/// uniformly with replacement; sigma_t = 1 iff that individual has not been
/// sampled before. Both sampling models are couplings of the same uniform
/// draw, so the identityless marginal of this stream is exactly p.
///
/// The seen-set belongs to the simulator (it plays nature and knows N);
/// the algorithms only ever see the Observation and the ObservationState.
class IdentityBasedSampler {
  public:
    explicit IdentityBasedSampler(const Instance& instance);

    /// Draws the next observation and folds it into state.
    Observation next(ObservationState& state, RngStream& rng);

  private:
    std::vector<std::int64_t> cumulative_;  // prefix sums of community sizes
    std::vector<std::uint8_t> seen_;
    std::int64_t population_;
};

/// Trace dump, one line per epoch: `t,community,fresh`, communities
/// 1-indexed, fresh empty under identityless sampling.
void write_trace_csv(std::ostream& out, std::span<const Observation> trace);
std::vector<Observation> read_trace_csv(std::istream& in);

}  // namespace modequest
