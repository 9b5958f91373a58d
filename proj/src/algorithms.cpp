#include "modequest/algorithms.hpp"

#include <cmath>
#include <stdexcept>

#include "modequest/ib_stats.hpp"
#include "modequest/iless_stats.hpp"

namespace modequest {

std::string rule_name(RuleFired rule) {
    switch (rule) {
        case RuleFired::Identityless: return "identityless";
        case RuleFired::IdentityBased: return "identity_based";
        case RuleFired::MaxEpochsCap: return "max_epochs_cap";
    }
    return "?";
}

double threshold_beta(int k, double delta) {
    if (k < 2) throw std::invalid_argument("threshold needs K >= 2");
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1]");
    }
    return std::log(static_cast<double>(k - 1) / delta);
}

namespace {

void check_run_args(double delta, std::int64_t max_epochs, std::int64_t check_every) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
    if (check_every < 1) throw std::invalid_argument("check_every must be >= 1");
}

TrialResult declare(const Instance& instance, std::int64_t t, int mode, RuleFired rule,
                    std::int64_t distinct_total) {
    TrialResult result;
    result.stopping_time = t;
    result.declared_mode = mode;
    result.rule_fired = rule;
    result.error = (mode != instance.mode());
    result.trace_len_distinct = distinct_total;
    return result;
}

TrialResult capped(std::int64_t max_epochs, std::int64_t distinct_total) {
    TrialResult result;
    result.stopping_time = max_epochs;
    result.rule_fired = RuleFired::MaxEpochsCap;
    result.trace_len_distinct = distinct_total;
    return result;
}

TrialResult run_identityless(const Instance& instance, double delta, RngStream& rng,
                             std::int64_t max_epochs, std::int64_t check_every,
                             bool one_v_one) {
    check_run_args(delta, max_epochs, check_every);
    const double beta = threshold_beta(instance.k(), delta);
    ObservationState state(instance.k());
    for (std::int64_t t = 1; t <= max_epochs; ++t) {
        Observation obs = sample_identityless(instance, rng);
        state.record(obs.community, obs.fresh);
        if (t % check_every != 0) continue;
        const IlessStatReport report = z_stat(state);
        if ((one_v_one ? report.z_tilde : report.z) > beta) {
            return declare(instance, t, report.a_hat, RuleFired::Identityless, 0);
        }
    }
    return capped(max_epochs, 0);
}

}  // namespace

TrialResult run_ni_me(const Instance& instance, double delta, RngStream& rng,
                      std::int64_t max_epochs, std::int64_t check_every) {
    return run_identityless(instance, delta, rng, max_epochs, check_every, false);
}

TrialResult run_ni_me_1v1(const Instance& instance, double delta, RngStream& rng,
                          std::int64_t max_epochs, std::int64_t check_every) {
    return run_identityless(instance, delta, rng, max_epochs, check_every, true);
}

TrialResult run_ib_cme(const Instance& instance, double delta, int alpha,
                       const PriorSpec& prior, RngStream& rng, std::int64_t max_epochs,
                       Algorithm piggyback, std::int64_t check_every) {
    check_run_args(delta, max_epochs, check_every);
    if (piggyback != Algorithm::NiMe && piggyback != Algorithm::NiMe1v1) {
        throw std::invalid_argument("piggyback must be an identityless rule");
    }
    const bool one_v_one = (piggyback == Algorithm::NiMe1v1);
    const double beta = threshold_beta(instance.k(), delta / 2.0);
    ObservationState state(instance.k());
    IdentityBasedSampler sampler(instance);
    for (std::int64_t t = 1; t <= max_epochs; ++t) {
        sampler.next(state, rng);
        if (t % check_every != 0) continue;
        const IlessStatReport iless = z_stat(state);
        if ((one_v_one ? iless.z_tilde : iless.z) > beta) {
            return declare(instance, t, iless.a_hat, RuleFired::Identityless,
                           state.distinct_total());
        }
        const IbStatReport ib = y_stat(state, t, alpha, prior);
        if (ib.active && ib.y > beta) {
            return declare(instance, t, ib.a_tilde, RuleFired::IdentityBased,
                           state.distinct_total());
        }
    }
    return capped(max_epochs, state.distinct_total());
}

TrialResult run_trial(const Instance& instance, const RunConfig& config, RngStream& rng) {
    switch (config.algorithm) {
        case Algorithm::NiMe:
            return run_ni_me(instance, config.delta, rng, config.max_epochs,
                             config.check_every);
        case Algorithm::NiMe1v1:
            return run_ni_me_1v1(instance, config.delta, rng, config.max_epochs,
                                 config.check_every);
        case Algorithm::IbCme:
            return run_ib_cme(instance, config.delta, config.alpha, config.prior, rng,
                              config.max_epochs, Algorithm::NiMe, config.check_every);
        case Algorithm::IbCme1v1:
            return run_ib_cme(instance, config.delta, config.alpha, config.prior, rng,
                              config.max_epochs, Algorithm::NiMe1v1, config.check_every);
    }
    throw std::logic_error("unknown algorithm");
}

TrialResult run_ni_me_on_trace(int k, std::span<const Observation> trace, double delta,
                               bool one_v_one) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    const double beta = threshold_beta(k, delta);
    ObservationState state(k);
    std::int64_t t = 0;
    for (const auto& obs : trace) {
        state.record(obs.community, std::nullopt);
        ++t;
        const IlessStatReport report = z_stat(state);
        if ((one_v_one ? report.z_tilde : report.z) > beta) {
            TrialResult result;
            result.stopping_time = t;
            result.declared_mode = report.a_hat;
            result.rule_fired = RuleFired::Identityless;
            return result;
        }
    }
    TrialResult result;
    result.stopping_time = static_cast<std::int64_t>(trace.size());
    result.rule_fired = RuleFired::MaxEpochsCap;
    return result;
}

}  // namespace modequest
