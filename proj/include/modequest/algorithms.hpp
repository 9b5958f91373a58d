#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "modequest/core.hpp"
#include "modequest/rng.hpp"
#include "modequest/sampler.hpp"

namespace modequest {

enum class RuleFired { Identityless, IdentityBased, MaxEpochsCap };

std::string rule_name(RuleFired rule);

/// Outcome of one run of a stopping algorithm. declared_mode is absent when
/// the epoch cap was hit (no declaration, error stays false by convention).
struct TrialResult {
    std::int64_t stopping_time = 0;
    std::optional<int> declared_mode;
    RuleFired rule_fired = RuleFired::MaxEpochsCap;
    bool error = false;
    std::int64_t trace_len_distinct = 0;  // sum_j S_j at stopping (identity-based runs)
};

/// beta(t, delta) = log((K-1)/delta); constant in t.
double threshold_beta(int k, double delta);

/// NI-ME: identityless sampling, stop at the first t with Z(t) > beta(t, delta),
/// declare the community with the largest sample count.
TrialResult run_ni_me(const Instance& instance, double delta, RngStream& rng,
                      std::int64_t max_epochs, std::int64_t check_every = 1);

/// NI-ME-1v1: as NI-ME with the pairwise statistic Z~(t) in place of Z(t).
TrialResult run_ni_me_1v1(const Instance& instance, double delta, RngStream& rng,
                          std::int64_t max_epochs, std::int64_t check_every = 1);

/// IB-CME(alpha, theta): identity-based sampling with two stopping rules per
/// epoch, both at confidence delta/2. The piggyback identityless condition
/// (NI-ME or NI-ME-1v1, per `piggyback`) is checked first; then, once
/// t > sum_j S_j(t) + K^(t), the Y(t) rule, declaring the community with the
/// most distinct individuals.
TrialResult run_ib_cme(const Instance& instance, double delta, int alpha,
                       const PriorSpec& prior, RngStream& rng, std::int64_t max_epochs,
                       Algorithm piggyback, std::int64_t check_every = 1);

/// Dispatches on config.algorithm.
TrialResult run_trial(const Instance& instance, const RunConfig& config, RngStream& rng);

/// Replays the NI-ME / NI-ME-1v1 stopping rule over a recorded trace,
/// e.g. for path-by-path comparisons; the trace's identityless marginal is
/// used (sigma flags, if any, are ignored).
TrialResult run_ni_me_on_trace(int k, std::span<const Observation> trace, double delta,
                               bool one_v_one = false);

}  // namespace modequest
