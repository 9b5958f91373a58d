#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "modequest/core.hpp"

using namespace modequest;

TEST_CASE("make_instance populates totals and mode") {
    const Instance i1 = make_instance({20, 12, 8, 5, 5}, "I1");
    CHECK(i1.total() == 50);
    CHECK(i1.k() == 5);
    CHECK(i1.mode() == 0);

    const Instance tiny = make_instance({2, 1});
    CHECK(tiny.total() == 3);
    CHECK(tiny.prob(0) == doctest::Approx(2.0 / 3.0));
    CHECK(tiny.prob(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("make_instance rejects malformed inputs") {
    CHECK_THROWS_AS(make_instance({5, 5}), std::invalid_argument);   // tied maximum
    CHECK_THROWS_AS(make_instance({7}), std::invalid_argument);      // K < 2
    CHECK_THROWS_AS(make_instance({3, 0}), std::invalid_argument);   // empty community
}

TEST_CASE("instance JSON round trip") {
    const Instance inst = make_instance({20, 16, 6, 4, 4}, "I2");
    const auto j = instance_to_json(inst);
    CHECK(j["sizes"].size() == 5);
    CHECK(j["name"] == "I2");
    const Instance back = instance_from_json(j);
    CHECK(back.sizes == inst.sizes);
    CHECK(back.name == inst.name);
}

TEST_CASE("scale_instance multiplies every community") {
    const Instance base = make_instance({20, 18, 6, 3, 3}, "I3");
    const Instance scaled = scale_instance(base, 5);
    CHECK(scaled.sizes == std::vector<std::int64_t>{100, 90, 30, 15, 15});
    CHECK(scaled.total() == 250);
}

TEST_CASE("geometric prior pmf") {
    const PriorSpec p01 = PriorSpec::geometric(0.1);
    CHECK(prior_pmf(p01, 0) == doctest::Approx(0.1));
    CHECK(prior_pmf(p01, 2) == doctest::Approx(0.081));
    const PriorSpec p09 = PriorSpec::geometric(0.9);
    CHECK(prior_pmf(p09, 1) == doctest::Approx(0.09));

    CHECK_THROWS_AS(PriorSpec::geometric(0.0), std::invalid_argument);
    CHECK_THROWS_AS(PriorSpec::geometric(1.0), std::invalid_argument);
    CHECK_THROWS_AS(prior_pmf(p01, -1), std::invalid_argument);

    CHECK(prior_log_pmf(p01, 7) == doctest::Approx(std::log(prior_pmf(p01, 7))));
}

TEST_CASE("prior partial sums match the closed form") {
    for (double q : {0.1, 0.5, 0.9}) {
        const PriorSpec spec = PriorSpec::geometric(q);
        for (int m : {0, 5, 20}) {
            double acc = 0.0;
            for (int i = 0; i <= m; ++i) acc += prior_pmf(spec, i);
            CHECK(acc == doctest::Approx(1.0 - std::pow(1.0 - q, m + 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("observation state bookkeeping") {
    ObservationState state(3);
    state.record(0, true);
    state.record(0, false);
    state.record(2, true);
    CHECK(state.t() == 3);
    CHECK(state.count(0) == 2);
    CHECK(state.distinct_count(0) == 1);
    CHECK(state.distinct_count(2) == 1);
    CHECK(state.distinct_total() == 2);
    CHECK(state.observed_communities() == 2);

    const auto from_counts = ObservationState::from_counts({2, 0, 1});
    CHECK(from_counts.t() == 3);
    CHECK(from_counts.count(0) == 2);
}

TEST_CASE("top_two breaks ties toward the lowest index") {
    const std::vector<std::int64_t> flat{3, 3, 3, 3};
    auto [a, b] = top_two(flat);
    CHECK(a == 0);
    CHECK(b == 1);

    const std::vector<std::int64_t> mixed{1, 7, 7, 2};
    auto [a2, b2] = top_two(mixed);
    CHECK(a2 == 1);
    CHECK(b2 == 2);
}

TEST_CASE("algorithm names round trip") {
    for (Algorithm a : {Algorithm::NiMe, Algorithm::NiMe1v1, Algorithm::IbCme,
                        Algorithm::IbCme1v1}) {
        CHECK(algorithm_from_name(algorithm_name(a)) == a);
    }
    CHECK_THROWS_AS(algorithm_from_name("nope"), std::invalid_argument);
}
