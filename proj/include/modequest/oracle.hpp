#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "modequest/core.hpp"

namespace modequest::oracle {

/// Brute-force references for the statistic modules. These deliberately
/// take independent arithmetic routes (enumeration, quadrature, grid
/// search, dense scans) from the closed forms they validate. Test-suite
/// use only; they can be orders of magnitude slower than the real paths.

struct GridSearchResult {
    std::vector<double> point;
    double log_likelihood = 0.0;
};

/// Best simplex grid point under p'_a <= p'_b for the multinomial
/// log-likelihood; step is the grid pitch (K <= 3).
GridSearchResult grid_constrained_mle(std::span<const std::int64_t> counts, int a, int b,
                                      double step);

/// E[prod_i p_i^{N_i}] under the uniform Dirichlet, by Gauss-Legendre
/// quadrature over the simplex (K in {2,3}).
double numeric_dirichlet_avg(std::span<const std::int64_t> counts);

/// max over d' in prod_j {S_j..cap} with d'_a <= d'_b of
/// sum_j sum_{l<S_j} log(d'_j - l) - t log(sum_i d'_i)   (K <= 3).
/// argmax, when requested, receives the maximizing hypothesis.
double enumerate_discrete_sup(const ObservationState& state, int a, int b,
                              std::int64_t t, std::int64_t cap,
                              std::vector<std::int64_t>* argmax = nullptr);

/// Direct enumeration of the T1 box sum (small boxes only).
double enumerate_t1_box(const ObservationState& state, int alpha, const PriorSpec& prior,
                        std::int64_t t);

struct GammaScan {
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int sign_changes = 0;
    bool monotone_decreasing = true;
};

/// Evaluates g over a uniform gamma grid: counts sign changes, brackets the
/// root, and checks that g1 decreases across the grid.
GammaScan dense_gamma_scan(const ObservationState& state, int a, int b, std::int64_t t,
                           int points);

/// Adaptive Simpson quadrature of int_{-1}^{S} log(d - v) dv.
double quadrature_log_integral(double d, std::int64_t s, double tol = 1e-12);

}  // namespace modequest::oracle
