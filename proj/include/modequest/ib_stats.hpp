#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modequest/core.hpp"
#include "modequest/sampler.hpp"

namespace modequest {

/// Result of the one-dimensional root-find behind the relaxed supremum.
/// gamma0 is the unique zero in (0,1) of g(gamma) = g1(gamma) - t, and
/// d_star holds the maximizer d^{a,b}_j(gamma0) for every community
/// (communities outside K^(t) get the closed form evaluated at S_j = 0).
struct GammaSolve {
    double gamma0 = 0.0;
    double g_value = 0.0;   // residual g(gamma0)
    int iterations = 0;
    std::vector<double> d_star;
};

/// Per-epoch identity-based statistic. Defined only once
/// t > sum_j S_j(t) + K^(t); before that `active` is false and y is
/// meaningless. y = t1 - t2 where t1 is the alpha-box average-likelihood
/// term and t2 the relaxed alternative-hypothesis supremum.
struct IbStatReport {
    bool active = false;
    double y = 0.0;
    int a_tilde = 0;
    int b_tilde = 1;
    double t1 = 0.0;
    double t2 = 0.0;
    double gamma0 = 0.0;
    std::int64_t box_size = 0;
};

/// r(gamma) = sqrt((S_a-S_b)^2 + 4 gamma^2 (1 + S_a + S_b + S_a S_b)).
double r_of_gamma(std::int64_t s_a, std::int64_t s_b, double gamma);

/// g1 for the pair-constrained problem (d'_a = d'_b branch); strictly
/// decreasing on (0,1) with g1 -> sum_j S_j + K^(t) as gamma -> 1.
double g1_constrained(const ObservationState& state, int a, int b, double gamma);

/// g1 for the unconstrained supremum (every observed d'_j = (S_j+g)/(1-g)).
double g1_unconstrained(const ObservationState& state, double gamma);

/// Root of g(gamma) = g1_constrained - t by bisection on (1e-12, 1-1e-12).
/// Requires S_a(t) >= S_b(t) and the activation condition
/// t > sum_j S_j + K^(t); throws std::invalid_argument otherwise.
GammaSolve solve_gamma0(const ObservationState& state, int a, int b, std::int64_t t);

/// Root of g(gamma) = g1_unconstrained - t, used when S_a(t) < S_b(t).
GammaSolve solve_gamma0_unconstrained(const ObservationState& state, std::int64_t t);

/// Closed form of the integral relaxation term int_{-1}^{S} log(d - v) dv
///   = (d+1) log(d+1) - (d+1) - (d-S) log(d-S) + (d-S),
/// with the (d-S) log(d-S) term read as 0 when d = S. Requires d >= S.
double log_integral_term(double d, std::int64_t s);

/// Exact log-likelihood of an identity-based trace under hypothesis d':
/// sum_j sum_{l<S_j} log(d'_j - l) + sum_tau (1-sigma_tau) log S_{x_tau}(tau-1)
/// - t log(sum_i d'_i). Returns -infinity when some d'_j < S_j(t) or the
/// hypothesis is empty.
double log_likelihood_ib(std::span<const std::int64_t> hypothesis,
                         std::span<const Observation> trace);

/// Number of hypotheses in the box S_alpha(t) = {d' : S_j <= d'_j <= alpha S_j}.
std::int64_t box_cardinality(const ObservationState& state, int alpha);

/// T1: log sum over the box S_alpha(t) of
///   prod_j prod_{l<S_j} (d'_j - l) * P_D(d') / (sum_i d'_i)^t,
/// computed in log space (log-sum-exp; -infinity is the identity element).
/// Requires at least one S_j(t) > 0.
double t1_box_sum(const ObservationState& state, int alpha, const PriorSpec& prior,
                  std::int64_t t);

/// Relaxed pairwise statistic Y_{a,b}(t) = T1 - T2. T2 evaluates the
/// integral terms over K^(t) at the closed-form maximizer (the
/// unconstrained one when S_a < S_b) and sums d* over all K communities.
double y_ab(const ObservationState& state, int a, int b, std::int64_t t, int alpha,
            const PriorSpec& prior);

/// Y(t) = max_a min_{b != a} Y_{a,b}(t) = Y_{a_tilde, b_tilde}(t), computed
/// for the single top pair of distinct counts. Reports inactive (rather
/// than throwing) when t <= sum_j S_j + K^(t).
IbStatReport y_stat(const ObservationState& state, std::int64_t t, int alpha,
                    const PriorSpec& prior);

}  // namespace modequest
