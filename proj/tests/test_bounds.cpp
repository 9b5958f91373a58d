#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "modequest/bounds.hpp"
#include "modequest/rng.hpp"

using namespace modequest;

TEST_CASE("binary relative entropy") {
    CHECK(kl_bernoulli(0.5, 0.5) == doctest::Approx(0.0));
    CHECK(kl_bernoulli(1.0, 0.5) == doctest::Approx(std::log(2.0)));
    CHECK(kl_bernoulli(0.75, 0.5) ==
          doctest::Approx(0.75 * std::log(1.5) + 0.25 * std::log(0.5)));
    CHECK_THROWS_AS(kl_bernoulli(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(kl_bernoulli(-0.1, 0.5), std::invalid_argument);
    CHECK(kl_bernoulli(0.0, 0.0) == 0.0);  // degenerate y allowed when x matches
    CHECK(kl_bernoulli(1.0, 1.0) == 0.0);
}

TEST_CASE("worked bounds on the harder benchmark instance") {
    const Instance i2 = make_instance({20, 16, 6, 4, 4}, "I2");
    const double p1 = 0.40, p2 = 0.32;
    const double expected_g = (p1 + p2) * kl_bernoulli(p1 / (p1 + p2), 0.5);
    CHECK(g_star(i2) == doctest::Approx(expected_g));
    CHECK(g_star(i2) == doctest::Approx(0.004454).epsilon(1e-3));

    CHECK(lb_identityless(i2, 0.1) ==
          doctest::Approx(std::log(1.0 / 0.24) / expected_g));
    CHECK(lb_identityless(i2, 0.1) == doctest::Approx(320.4).epsilon(1e-3));
    CHECK(lb_identity_based(i2, 0.1) ==
          doctest::Approx(std::log(1.0 / 0.24) / std::log(55.0 / 50.0)));
    CHECK(lb_identity_based(i2, 0.1) == doctest::Approx(14.97).epsilon(1e-3));

    const BoundReport report = bound_ratio_check(i2, 0.1);
    CHECK(report.ratio_lhs == doctest::Approx(21.4).epsilon(1e-2));
    CHECK(report.ratio_lower == doctest::Approx(6.238).epsilon(1e-3));
    CHECK(report.ratio_ok);
}

TEST_CASE("degenerate confidence levels") {
    const Instance tiny = make_instance({2, 1});
    CHECK(lb_identityless(tiny, 1.0 / 2.4) == doctest::Approx(0.0));
    const BoundReport report = bound_ratio_check(tiny, 0.1);
    CHECK(report.ratio_lhs > report.ratio_lower);
    CHECK(std::isfinite(report.ratio_lhs));
}

TEST_CASE("bound ordering holds across random instances") {
    RngStream rng(51, 0);
    for (int rep = 0; rep < 1000; ++rep) {
        const int k = 2 + static_cast<int>(rng.uniform_below(7));
        std::vector<std::int64_t> sizes(k);
        for (;;) {
            for (auto& d : sizes) d = 1 + rng.uniform_below(100);
            std::int64_t best = 0;
            int ties = 0;
            for (auto d : sizes) {
                if (d > best) {
                    best = d;
                    ties = 1;
                } else if (d == best) {
                    ++ties;
                }
            }
            if (ties == 1) break;
        }
        const Instance inst = make_instance(sizes);
        const BoundReport report = bound_ratio_check(inst, 0.1);
        CHECK(report.ratio_ok);
        CHECK(report.lb_identityless > report.lb_identity_based);
    }
}

TEST_CASE("population scaling moves only the identity-based bound") {
    const Instance base = make_instance({20, 18, 6, 3, 3}, "I3");
    const double iless_1 = lb_identityless(base, 0.1);
    double prev_ib = 0.0;
    for (std::int64_t omega : {1, 5, 10}) {
        const Instance scaled = scale_instance(base, omega);
        CHECK(lb_identityless(scaled, 0.1) == doctest::Approx(iless_1).epsilon(1e-12));
        const double ib = lb_identity_based(scaled, 0.1);
        CHECK(ib > prev_ib);
        prev_ib = ib;
    }
}

TEST_CASE("near-tied communities blow up the identity-based bound with N") {
    double prev = 0.0;
    for (std::int64_t n : {2, 10, 50}) {
        const Instance inst = make_instance({n + 1, n});
        const double bound = lb_identity_based(inst, 0.1);
        CHECK(bound > prev);
        prev = bound;
    }
}
