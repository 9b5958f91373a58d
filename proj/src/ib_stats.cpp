#include "modequest/ib_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modequest {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBracketLo = 1e-12;
constexpr double kBracketHi = 1.0 - 1e-12;
constexpr double kResidualTol = 1e-8;
constexpr int kMaxBisectIters = 200;

void check_active(const ObservationState& state, std::int64_t t) {
    if (t <= state.distinct_total() + state.observed_communities()) {
        throw std::invalid_argument(
            "identity-based statistic undefined until t > sum_j S_j(t) + K^(t)");
    }
}

// Bisection for the unique zero of a strictly decreasing g on (lo, hi).
// Tolerance is on the residual |g|, not on gamma; the loop keeps halving
// until the residual target is met or the interval collapses to adjacent
// doubles.
template <class G>
GammaSolve bisect_decreasing_on(const G& g, double lo, double hi) {
    GammaSolve out;
    double mid = 0.5 * (lo + hi);
    double g_mid = g(mid);
    for (int i = 0; i < kMaxBisectIters; ++i) {
        ++out.iterations;
        if (std::abs(g_mid) <= kResidualTol) break;
        if (g_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        double next = 0.5 * (lo + hi);
        if (next == lo || next == hi) {  // interval exhausted at double precision
            mid = next;
            g_mid = g(mid);
            break;
        }
        mid = next;
        g_mid = g(mid);
    }
    out.gamma0 = mid;
    out.g_value = g_mid;
    return out;
}

template <class G>
GammaSolve bisect_decreasing(const G& g, double lo, double hi) {
    const double g_hi = g(hi);
    if (!(g_hi < 0.0)) {
        throw std::invalid_argument("root of g not bracketed in (0,1)");
    }
    if (g(lo) > 0.0) {
        return bisect_decreasing_on(g, lo, hi);
    }
    // Root below the standard bracket (t huge relative to the distinct
    // counts). Bisect on v = log(gamma) instead; v = -745 reaches the
    // smallest positive doubles.
    auto g_of_v = [&](double v) { return g(std::exp(v)); };  // still decreasing
    if (!(g_of_v(-745.0) > 0.0)) {
        throw std::invalid_argument("root of g not bracketed in (0,1)");
    }
    GammaSolve deep = bisect_decreasing_on(g_of_v, -745.0, std::log(lo));
    deep.gamma0 = std::exp(deep.gamma0);
    return deep;
}

double sum_observed_excluding(const ObservationState& state, int a, int b) {
    double acc = 0.0;
    for (int j = 0; j < state.k(); ++j) {
        if (j == a || j == b) continue;
        acc += static_cast<double>(state.distinct_count(j));
    }
    return acc;
}

}  // namespace

double r_of_gamma(std::int64_t s_a, std::int64_t s_b, double gamma) {
    const double sa = static_cast<double>(s_a);
    const double sb = static_cast<double>(s_b);
    const double diff = sa - sb;
    return std::sqrt(diff * diff + 4.0 * gamma * gamma * (1.0 + sa + sb + sa * sb));
}

double g1_constrained(const ObservationState& state, int a, int b, double gamma) {
    const double sa = static_cast<double>(state.distinct_count(a));
    const double sb = static_cast<double>(state.distinct_count(b));
    const double kt = state.observed_communities();
    const double others = sum_observed_excluding(state, a, b);
    const double part1 = (others + gamma * (kt - 2.0)) / (1.0 - gamma);
    const double part2 =
        (sa + sb + 2.0 * gamma * gamma + r_of_gamma(state.distinct_count(a),
                                                    state.distinct_count(b), gamma)) /
        (1.0 - gamma * gamma);
    return std::log(1.0 / gamma) * (part1 + part2);
}

double g1_unconstrained(const ObservationState& state, double gamma) {
    const double kt = state.observed_communities();
    const double total = static_cast<double>(state.distinct_total());
    return std::log(1.0 / gamma) * (total + gamma * kt) / (1.0 - gamma);
}

GammaSolve solve_gamma0(const ObservationState& state, int a, int b, std::int64_t t) {
    if (a == b) throw std::invalid_argument("community pair must be distinct");
    if (state.distinct_count(a) < state.distinct_count(b)) {
        throw std::invalid_argument("constrained solve requires S_a >= S_b");
    }
    check_active(state, t);
    auto g = [&](double gamma) {
        return g1_constrained(state, a, b, gamma) - static_cast<double>(t);
    };
    GammaSolve solve = bisect_decreasing(g, kBracketLo, kBracketHi);
    const double g0 = solve.gamma0;
    const double pair_value =
        (static_cast<double>(state.distinct_count(a) + state.distinct_count(b)) +
         2.0 * g0 * g0 + r_of_gamma(state.distinct_count(a), state.distinct_count(b), g0)) /
        (2.0 * (1.0 - g0 * g0));
    solve.d_star.resize(state.k());
    for (int j = 0; j < state.k(); ++j) {
        solve.d_star[j] = (j == a || j == b)
                              ? pair_value
                              : (static_cast<double>(state.distinct_count(j)) + g0) / (1.0 - g0);
    }
    return solve;
}

GammaSolve solve_gamma0_unconstrained(const ObservationState& state, std::int64_t t) {
    check_active(state, t);
    auto g = [&](double gamma) {
        return g1_unconstrained(state, gamma) - static_cast<double>(t);
    };
    GammaSolve solve = bisect_decreasing(g, kBracketLo, kBracketHi);
    const double g0 = solve.gamma0;
    solve.d_star.resize(state.k());
    for (int j = 0; j < state.k(); ++j) {
        solve.d_star[j] = (static_cast<double>(state.distinct_count(j)) + g0) / (1.0 - g0);
    }
    return solve;
}

double log_integral_term(double d, std::int64_t s) {
    const double sd = static_cast<double>(s);
    if (d < sd) throw std::invalid_argument("integral term requires d >= S");
    const double head = (d + 1.0) * std::log(d + 1.0) - (d + 1.0);
    const double gap = d - sd;
    const double tail = (gap > 0.0) ? gap * std::log(gap) : 0.0;  // x log x -> 0
    return head - tail + gap;
}

double log_likelihood_ib(std::span<const std::int64_t> hypothesis,
                         std::span<const Observation> trace) {
    const int k = static_cast<int>(hypothesis.size());
    std::vector<std::int64_t> s(k, 0);
    double repeats = 0.0;
    for (const auto& obs : trace) {
        if (obs.community < 0 || obs.community >= k) {
            throw std::invalid_argument("trace community out of range");
        }
        if (!obs.fresh.has_value()) {
            throw std::invalid_argument("identity-based likelihood needs sigma flags");
        }
        if (*obs.fresh) {
            ++s[obs.community];
        } else {
            if (s[obs.community] <= 0) return kNegInf;  // impossible trace
            repeats += std::log(static_cast<double>(s[obs.community]));
        }
    }
    double total = 0.0;
    double fresh_products = 0.0;
    for (int j = 0; j < k; ++j) {
        if (hypothesis[j] < s[j]) return kNegInf;
        total += static_cast<double>(hypothesis[j]);
        for (std::int64_t l = 0; l < s[j]; ++l) {
            fresh_products += std::log(static_cast<double>(hypothesis[j] - l));
        }
    }
    if (total <= 0.0) return kNegInf;
    return fresh_products + repeats -
           static_cast<double>(trace.size()) * std::log(total);
}

std::int64_t box_cardinality(const ObservationState& state, int alpha) {
    std::int64_t cells = 1;
    for (int j = 0; j < state.k(); ++j) {
        const std::int64_t s = state.distinct_count(j);
        if (s > 0) cells *= (static_cast<std::int64_t>(alpha) - 1) * s + 1;
    }
    return cells;
}

double t1_box_sum(const ObservationState& state, int alpha, const PriorSpec& prior,
                  std::int64_t t) {
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    if (state.distinct_total() < 1) {
        throw std::invalid_argument("T1 needs at least one observed community");
    }

    // The box sum factorizes per community except for the coupling through
    // (sum_i d'_i)^t. Group hypotheses by their total m: convolving the
    // per-community weight sequences gives the aggregate weight of every m,
    // after which a single log-sum-exp over m applies the 1/m^t factor.
    double log_scale = 0.0;  // sum of per-community max log-weights
    std::vector<double> coef{1.0};
    std::int64_t base = 0;  // smallest achievable total, sum_j S_j
    for (int j = 0; j < state.k(); ++j) {
        const std::int64_t s = state.distinct_count(j);
        if (s == 0) {
            // box pins d'_j = 0; only the prior mass at zero contributes
            log_scale += prior_log_pmf(prior, 0);
            continue;
        }
        const std::int64_t lo = s;
        const std::int64_t hi = static_cast<std::int64_t>(alpha) * s;
        std::vector<double> logw(static_cast<std::size_t>(hi - lo + 1));
        double falling = 0.0;  // log prod_{l<s} (d - l), updated as d grows
        for (std::int64_t l = 0; l < s; ++l) {
            falling += std::log(static_cast<double>(lo - l));
        }
        for (std::int64_t d = lo; d <= hi; ++d) {
            if (d > lo) {
                falling += std::log(static_cast<double>(d)) -
                           std::log(static_cast<double>(d - s));
            }
            logw[static_cast<std::size_t>(d - lo)] = falling + prior_log_pmf(prior, d);
        }
        const double peak = *std::max_element(logw.begin(), logw.end());
        log_scale += peak;
        std::vector<double> w(logw.size());
        for (std::size_t i = 0; i < logw.size(); ++i) w[i] = std::exp(logw[i] - peak);

        std::vector<double> next(coef.size() + w.size() - 1, 0.0);
        for (std::size_t i = 0; i < coef.size(); ++i) {
            for (std::size_t m = 0; m < w.size(); ++m) {
                next[i + m] += coef[i] * w[m];
            }
        }
        coef = std::move(next);
        base += lo;
    }

    double best = kNegInf;
    std::vector<double> log_terms(coef.size(), kNegInf);
    for (std::size_t i = 0; i < coef.size(); ++i) {
        if (coef[i] <= 0.0) continue;
        const double m = static_cast<double>(base + static_cast<std::int64_t>(i));
        log_terms[i] = std::log(coef[i]) + log_scale - static_cast<double>(t) * std::log(m);
        best = std::max(best, log_terms[i]);
    }
    if (best == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double lt : log_terms) {
        if (lt != kNegInf) acc += std::exp(lt - best);
    }
    return best + std::log(acc);
}

namespace {

// T2: integral terms over observed communities at the maximizer, minus
// t log of the d* total taken over every community.
double t2_from_solve(const ObservationState& state, const GammaSolve& solve,
                     std::int64_t t) {
    double integrals = 0.0;
    double total = 0.0;
    for (int j = 0; j < state.k(); ++j) {
        total += solve.d_star[j];
        if (state.distinct_count(j) > 0) {
            integrals += log_integral_term(solve.d_star[j], state.distinct_count(j));
        }
    }
    return integrals - static_cast<double>(t) * std::log(total);
}

}  // namespace

double y_ab(const ObservationState& state, int a, int b, std::int64_t t, int alpha,
            const PriorSpec& prior) {
    if (a == b) throw std::invalid_argument("community pair must be distinct");
    check_active(state, t);
    const GammaSolve solve = (state.distinct_count(a) >= state.distinct_count(b))
                                 ? solve_gamma0(state, a, b, t)
                                 : solve_gamma0_unconstrained(state, t);
    return t1_box_sum(state, alpha, prior, t) - t2_from_solve(state, solve, t);
}

IbStatReport y_stat(const ObservationState& state, std::int64_t t, int alpha,
                    const PriorSpec& prior) {
    IbStatReport report;
    if (t <= state.distinct_total() + state.observed_communities()) {
        return report;  // inactive
    }
    auto [a, b] = top_two(state.distinct());
    report.active = true;
    report.a_tilde = a;
    report.b_tilde = b;
    report.box_size = box_cardinality(state, alpha);

    const GammaSolve solve = solve_gamma0(state, a, b, t);  // S_a >= S_b by choice of pair
    report.gamma0 = solve.gamma0;
    report.t1 = t1_box_sum(state, alpha, prior, t);
    report.t2 = t2_from_solve(state, solve, t);
    report.y = report.t1 - report.t2;
    return report;
}

}  // namespace modequest
