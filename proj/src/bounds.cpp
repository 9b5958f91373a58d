#include "modequest/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace modequest {

double kl_bernoulli(double x, double y) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("kl: x must lie in [0,1]");
    if (!(y > 0.0 && y < 1.0)) {
        if (x == y) return 0.0;  // degenerate match; the mismatch case is +inf
        throw std::invalid_argument("kl: y must lie in (0,1)");
    }
    double acc = 0.0;
    if (x > 0.0) acc += x * std::log(x / y);
    if (x < 1.0) acc += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
    return acc;
}

double g_star(const Instance& instance) {
    const double n = static_cast<double>(instance.total());
    const double p1 = static_cast<double>(instance.largest()) / n;
    const double p2 = static_cast<double>(instance.second_largest()) / n;
    return (p1 + p2) * kl_bernoulli(p1 / (p1 + p2), 0.5);
}

namespace {

double log_confidence(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    return std::log(1.0 / (2.4 * delta));
}

}  // namespace

double lb_identityless(const Instance& instance, double delta) {
    return log_confidence(delta) / g_star(instance);
}

double lb_identity_based(const Instance& instance, double delta) {
    const double n = static_cast<double>(instance.total());
    const double d1 = static_cast<double>(instance.largest());
    const double d2 = static_cast<double>(instance.second_largest());
    return log_confidence(delta) / std::log((n - d2 + d1 + 1.0) / n);
}

BoundReport bound_ratio_check(const Instance& instance, double delta) {
    const double n = static_cast<double>(instance.total());
    const double d1 = static_cast<double>(instance.largest());
    const double d2 = static_cast<double>(instance.second_largest());
    const double p1 = d1 / n;
    const double p2 = d2 / n;

    BoundReport report;
    report.g_star = g_star(instance);
    report.lb_identityless = lb_identityless(instance, delta);
    report.lb_identity_based = lb_identity_based(instance, delta);
    report.ratio_lhs = std::log((n - d2 + d1 + 1.0) / n) / report.g_star;
    report.ratio_mid = std::log((n - d2 + d1) / n) / report.g_star;
    report.ratio_lower = (p1 + p2) * std::log(2.0) / (p1 - p2);
    report.ratio_ok =
        report.ratio_lhs > report.ratio_mid && report.ratio_mid > report.ratio_lower;
    return report;
}

}  // namespace modequest
