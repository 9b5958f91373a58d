#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "modequest/core.hpp"
#include "modequest/rng.hpp"
#include "modequest/sampler.hpp"

using namespace modequest;

namespace {

double chi_square(const std::vector<std::int64_t>& observed,
                  const std::vector<double>& expected) {
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double diff = static_cast<double>(observed[i]) - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

}  // namespace

TEST_CASE("identityless frequencies follow p") {
    const Instance inst = make_instance({20, 16, 6, 4, 4});
    RngStream rng(123, 0);
    const int draws = 100'000;
    std::vector<std::int64_t> hits(5, 0);
    for (int i = 0; i < draws; ++i) {
        const Observation obs = sample_identityless(inst, rng);
        CHECK_FALSE(obs.fresh.has_value());
        ++hits[obs.community];
    }
    std::vector<double> expected;
    for (int j = 0; j < 5; ++j) expected.push_back(draws * inst.prob(j));
    // df = 4, 99% critical value
    CHECK(chi_square(hits, expected) < 13.277);
}

TEST_CASE("streams are deterministic per (seed, stream)") {
    const Instance inst = make_instance({3, 1});
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const int xa = sample_identityless(inst, a).community;
        const int xb = sample_identityless(inst, b).community;
        const int xc = sample_identityless(inst, c).community;
        all_equal = all_equal && (xa == xb);
        any_diff = any_diff || (xa != xc);
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("identity flags: first draw fresh, exhausted population repeats") {
    const Instance inst = make_instance({2, 1});
    RngStream rng(9, 0);
    IdentityBasedSampler sampler(inst);
    ObservationState state(2);
    const Observation first = sampler.next(state, rng);
    CHECK(first.fresh.has_value());
    CHECK(*first.fresh);

    while (state.distinct_total() < inst.total()) {
        sampler.next(state, rng);
    }
    for (int i = 0; i < 50; ++i) {
        const Observation obs = sampler.next(state, rng);
        CHECK_FALSE(*obs.fresh);
    }
    CHECK(state.distinct_count(0) == 2);
    CHECK(state.distinct_count(1) == 1);
}

TEST_CASE("identity-based transition kernel at S=(1,0)") {
    // d = [2,1]: from S = (1,0) the next draw is (new c1, new c2, repeat)
    // with probability 1/3 each.
    const Instance inst = make_instance({2, 1});
    std::vector<std::int64_t> buckets(3, 0);
    std::int64_t reached = 0;
    for (int trial = 0; trial < 200'000; ++trial) {
        RngStream rng(1000, static_cast<std::uint64_t>(trial));
        IdentityBasedSampler sampler(inst);
        ObservationState state(2);
        const Observation first = sampler.next(state, rng);
        if (first.community != 0) continue;  // want state S = (1, 0)
        ++reached;
        const Observation second = sampler.next(state, rng);
        if (!*second.fresh) {
            ++buckets[2];
        } else {
            ++buckets[second.community];
        }
    }
    std::vector<double> expected(3, static_cast<double>(reached) / 3.0);
    CHECK(chi_square(buckets, expected) < 9.210);  // df = 2, 99%
}

TEST_CASE("identityless marginal of the identity-based stream follows p") {
    const Instance inst = make_instance({20, 16, 6, 4, 4});
    RngStream rng(77, 0);
    IdentityBasedSampler sampler(inst);
    ObservationState state(5);
    const int draws = 100'000;
    std::vector<std::int64_t> hits(5, 0);
    for (int i = 0; i < draws; ++i) ++hits[sampler.next(state, rng).community];
    std::vector<double> expected;
    for (int j = 0; j < 5; ++j) expected.push_back(draws * inst.prob(j));
    CHECK(chi_square(hits, expected) < 13.277);
}

TEST_CASE("distinct counts saturate to the community sizes") {
    const Instance inst = make_instance({20, 12, 8, 5, 5});
    const auto n = static_cast<double>(inst.total());
    const auto horizon = static_cast<std::int64_t>(20.0 * n * std::log(n));
    int saturated = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        RngStream rng(5, static_cast<std::uint64_t>(trial));
        IdentityBasedSampler sampler(inst);
        ObservationState state(inst.k());
        for (std::int64_t i = 0; i < horizon; ++i) sampler.next(state, rng);
        bool full = true;
        for (int j = 0; j < inst.k(); ++j) {
            full = full && (state.distinct_count(j) == inst.sizes[j]);
        }
        saturated += full;
    }
    CHECK(saturated >= 99);
}

TEST_CASE("trace CSV round trip") {
    std::vector<Observation> trace{{0, true}, {1, true}, {0, false}, {2, true}};
    std::ostringstream out;
    write_trace_csv(out, trace);
    std::istringstream in(out.str());
    const auto back = read_trace_csv(in);
    REQUIRE(back.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(back[i].community == trace[i].community);
        CHECK(back[i].fresh == trace[i].fresh);
    }

    std::vector<Observation> identityless{{0, std::nullopt}, {1, std::nullopt}};
    std::ostringstream out2;
    write_trace_csv(out2, identityless);
    CHECK(out2.str() == "t,community,fresh\n1,1,\n2,2,\n");
    std::istringstream in2(out2.str());
    const auto back2 = read_trace_csv(in2);
    REQUIRE(back2.size() == 2);
    CHECK_FALSE(back2[0].fresh.has_value());
}
