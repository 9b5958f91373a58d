#pragma once

#include "modequest/core.hpp"

namespace modequest {

/// Expected-sample lower bounds and their comparison. Reporting/validation
/// only: the algorithms never read these (they would amount to instance
/// knowledge the learner does not have).
struct BoundReport {
    double g_star = 0.0;            // (p1+p2) kl(p1/(p1+p2), 1/2)
    double lb_identityless = 0.0;   // log(1/(2.4 delta)) / g_star
    double lb_identity_based = 0.0; // log(1/(2.4 delta)) / log((N-d2+d1+1)/N)
    double ratio_lhs = 0.0;         // log((N-d2+d1+1)/N) / g_star
    double ratio_mid = 0.0;         // log((N-d2+d1)/N) / g_star
    double ratio_lower = 0.0;       // (p1+p2) log 2 / (p1-p2)
    bool ratio_ok = false;          // ratio_lhs > ratio_mid > ratio_lower
};

/// Binary relative entropy kl(x, y) with 0 log 0 := 0.
/// Requires x in [0,1] and y in (0,1).
double kl_bernoulli(double x, double y);

/// g*(p) for the top two communities of the instance.
double g_star(const Instance& instance);

/// Identityless expected-sample lower bound for any delta-PC algorithm.
double lb_identityless(const Instance& instance, double delta);

/// Identity-based expected-sample lower bound for any delta-PC algorithm.
double lb_identity_based(const Instance& instance, double delta);

/// Evaluates both bounds plus the ratio inequality chain.
BoundReport bound_ratio_check(const Instance& instance, double delta);

}  // namespace modequest
