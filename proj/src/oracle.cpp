#include "modequest/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace modequest::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));  // initial guess on [-1,1]
        double p0 = 0.0, p1 = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = 0.5 * (x + 1.0);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // already scaled for [0,1]
    }
}

double pow_int(double base, std::int64_t e) {
    double acc = 1.0;
    for (std::int64_t i = 0; i < e; ++i) acc *= base;
    return acc;
}

}  // namespace

GridSearchResult grid_constrained_mle(std::span<const std::int64_t> counts, int a, int b,
                                      double step) {
    const int k = static_cast<int>(counts.size());
    if (k != 2 && k != 3) throw std::invalid_argument("grid search supports K in {2,3}");
    const auto cells = static_cast<std::int64_t>(std::llround(1.0 / step));
    std::vector<double> log_table(static_cast<std::size_t>(cells) + 1, kNegInf);
    for (std::int64_t i = 1; i <= cells; ++i) {
        log_table[static_cast<std::size_t>(i)] =
            std::log(static_cast<double>(i) / static_cast<double>(cells));
    }
    auto loglik = [&](std::span<const std::int64_t> idx) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) {
            if (counts[j] == 0) continue;
            if (idx[j] == 0) return kNegInf;
            acc += static_cast<double>(counts[j]) *
                   log_table[static_cast<std::size_t>(idx[j])];
        }
        return acc;
    };

    GridSearchResult best;
    best.log_likelihood = kNegInf;
    std::vector<std::int64_t> idx(k, 0);
    if (k == 2) {
        for (std::int64_t i = 0; i <= cells; ++i) {
            idx[0] = i;
            idx[1] = cells - i;
            if (idx[a] > idx[b]) continue;
            const double ll = loglik(idx);
            if (ll > best.log_likelihood) {
                best.log_likelihood = ll;
                best.point = {static_cast<double>(idx[0]) / cells,
                              static_cast<double>(idx[1]) / cells};
            }
        }
    } else {
        for (std::int64_t i = 0; i <= cells; ++i) {
            for (std::int64_t j = 0; j <= cells - i; ++j) {
                idx[0] = i;
                idx[1] = j;
                idx[2] = cells - i - j;
                if (idx[a] > idx[b]) continue;
                const double ll = loglik(idx);
                if (ll > best.log_likelihood) {
                    best.log_likelihood = ll;
                    best.point = {static_cast<double>(idx[0]) / cells,
                                  static_cast<double>(idx[1]) / cells,
                                  static_cast<double>(idx[2]) / cells};
                }
            }
        }
    }
    return best;
}

double numeric_dirichlet_avg(std::span<const std::int64_t> counts) {
    const int k = static_cast<int>(counts.size());
    if (k != 2 && k != 3) {
        throw std::invalid_argument("numeric Dirichlet average supports K in {2,3}");
    }
    static thread_local std::vector<double> nodes, weights;
    if (nodes.size() != 48) gauss_legendre_01(48, nodes, weights);

    if (k == 2) {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            acc += weights[i] * pow_int(nodes[i], counts[0]) *
                   pow_int(1.0 - nodes[i], counts[1]);
        }
        return acc;  // density 1/B(1,1) = 1
    }
    // p1 = u, p2 = (1-u) v, p3 = (1-u)(1-v); Jacobian (1-u); density Gamma(3) = 2
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double u = nodes[i];
        double inner = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const double v = nodes[j];
            inner += weights[j] * pow_int((1.0 - u) * v, counts[1]) *
                     pow_int((1.0 - u) * (1.0 - v), counts[2]);
        }
        acc += weights[i] * pow_int(u, counts[0]) * (1.0 - u) * inner;
    }
    return 2.0 * acc;
}

double enumerate_discrete_sup(const ObservationState& state, int a, int b,
                              std::int64_t t, std::int64_t cap,
                              std::vector<std::int64_t>* argmax) {
    const int k = state.k();
    if (k > 3) throw std::invalid_argument("enumeration supports K <= 3");
    std::vector<std::int64_t> d(k, 0);
    double best = kNegInf;
    auto value = [&]() {
        std::int64_t total = 0;
        for (auto v : d) total += v;
        if (total == 0 || d[a] > d[b]) return kNegInf;
        double acc = -static_cast<double>(t) * std::log(static_cast<double>(total));
        for (int j = 0; j < k; ++j) {
            for (std::int64_t l = 0; l < state.distinct_count(j); ++l) {
                acc += std::log(static_cast<double>(d[j] - l));
            }
        }
        return acc;
    };
    // odometer over {S_j..cap}^K
    for (int j = 0; j < k; ++j) d[j] = state.distinct_count(j);
    for (;;) {
        const double v = value();
        if (v > best) {
            best = v;
            if (argmax) *argmax = d;
        }
        int j = 0;
        while (j < k) {
            if (++d[j] <= cap) break;
            d[j] = state.distinct_count(j);
            ++j;
        }
        if (j == k) break;
    }
    return best;
}

double enumerate_t1_box(const ObservationState& state, int alpha, const PriorSpec& prior,
                        std::int64_t t) {
    const int k = state.k();
    std::vector<std::int64_t> lo(k), hi(k), d(k);
    for (int j = 0; j < k; ++j) {
        lo[j] = state.distinct_count(j);
        hi[j] = (lo[j] > 0) ? alpha * lo[j] : 0;
        d[j] = lo[j];
    }
    std::vector<double> log_terms;
    for (;;) {
        std::int64_t total = 0;
        double term = 0.0;
        for (int j = 0; j < k; ++j) {
            total += d[j];
            term += prior_log_pmf(prior, d[j]);
            for (std::int64_t l = 0; l < state.distinct_count(j); ++l) {
                term += std::log(static_cast<double>(d[j] - l));
            }
        }
        if (total > 0) {
            log_terms.push_back(term -
                                static_cast<double>(t) *
                                    std::log(static_cast<double>(total)));
        }
        int j = 0;
        while (j < k) {
            if (++d[j] <= hi[j]) break;
            d[j] = lo[j];
            ++j;
        }
        if (j == k) break;
    }
    if (log_terms.empty()) return kNegInf;
    double peak = kNegInf;
    for (double v : log_terms) peak = std::max(peak, v);
    double acc = 0.0;
    for (double v : log_terms) acc += std::exp(v - peak);
    return peak + std::log(acc);
}

GammaScan dense_gamma_scan(const ObservationState& state, int a, int b, std::int64_t t,
                           int points) {
    if (points < 10) throw std::invalid_argument("scan needs at least 10 points");
    const double sa = static_cast<double>(state.distinct_count(a));
    const double sb = static_cast<double>(state.distinct_count(b));
    int observed_others = 0;
    double sum_others = 0.0;
    for (int j = 0; j < state.k(); ++j) {
        if (j == a || j == b || state.distinct_count(j) == 0) continue;
        ++observed_others;
        sum_others += static_cast<double>(state.distinct_count(j));
    }
    const int kt = state.observed_communities();

    // Independent route to g1: per-community optimizer values, with the pair
    // value obtained from the quadratic gamma^2 (x+1)^2 = (x-S_a)(x-S_b)
    // rather than the grouped display.
    auto g1 = [&](double gamma) {
        const double qa = 1.0 - gamma * gamma;
        const double qb = -(sa + sb + 2.0 * gamma * gamma);
        const double qc = sa * sb - gamma * gamma;
        const double disc = qb * qb - 4.0 * qa * qc;
        const double pair = (-qb + std::sqrt(disc)) / (2.0 * qa);
        double total = 2.0 * pair + (sum_others + gamma * observed_others) / (1.0 - gamma);
        // the fixed point counts K^(t)-2 gamma terms besides the pair
        total += gamma * static_cast<double>(kt - 2 - observed_others) / (1.0 - gamma);
        return std::log(1.0 / gamma) * total;
    };

    GammaScan scan;
    double prev_gamma = 1.0 / (points + 1);
    double prev_g1 = g1(prev_gamma);
    double prev_g = prev_g1 - static_cast<double>(t);
    for (int i = 2; i <= points; ++i) {
        const double gamma = static_cast<double>(i) / (points + 1);
        const double cur_g1 = g1(gamma);
        const double cur_g = cur_g1 - static_cast<double>(t);
        if (cur_g1 >= prev_g1) scan.monotone_decreasing = false;
        if ((prev_g > 0.0) != (cur_g > 0.0)) {
            ++scan.sign_changes;
            scan.bracket_lo = prev_gamma;
            scan.bracket_hi = gamma;
        }
        prev_gamma = gamma;
        prev_g1 = cur_g1;
        prev_g = cur_g;
    }
    return scan;
}

double quadrature_log_integral(double d, std::int64_t s, double tol) {
    // integrate log(u) over [d - s, d + 1] (u = d - v)
    const double lo = d - static_cast<double>(s);
    const double hi = d + 1.0;
    if (lo < 0.0) throw std::invalid_argument("quadrature requires d >= S");
    struct Simpson {
        double operator()(double a2, double b2, double fa, double fb, double fm,
                          double whole, double eps, int depth) const {
            const double m = 0.5 * (a2 + b2);
            const double lm = 0.5 * (a2 + m);
            const double rm = 0.5 * (m + b2);
            const double flm = std::log(lm);
            const double frm = std::log(rm);
            const double left = (m - a2) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b2 - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
                return left + right + (left + right - whole) / 15.0;
            }
            return (*this)(a2, m, fa, fm, flm, left, 0.5 * eps, depth - 1) +
                   (*this)(m, b2, fm, fb, frm, right, 0.5 * eps, depth - 1);
        }
    } simpson;
    const double m = 0.5 * (lo + hi);
    const double fa = std::log(lo);
    const double fb = std::log(hi);
    const double fm = std::log(m);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(lo, hi, fa, fb, fm, whole, tol, 48);
}

}  // namespace modequest::oracle
