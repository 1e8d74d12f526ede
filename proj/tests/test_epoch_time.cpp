#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "netlearn/epoch_time.hpp"
#include "netlearn/simulate.hpp"

using namespace netlearn;
using namespace testing_support;

namespace {

Topology single(double rate = 0.0) {
    auto t = make_topology(1, 1, Exponential{1.0}, Exponential{1.0}, 100.0, rate);
    add_complete_il(t);
    return t;
}

}  // namespace

TEST_CASE("one l-node fed by one i-node") {
    const auto t = single();
    const Selection s{{}, {0}, 1};
    CHECK(std::abs(expectation(epoch_duration_pdf(t, s, 1)) - 2.0) < 2e-3);
    CHECK(std::abs(expected_learning_time(t, s) - 2.0) < 2e-3);
    const Selection three{{}, {0}, 3};
    CHECK(std::abs(expected_learning_time(t, three) - 6.0) < 5e-3);
}

TEST_CASE("single epoch equals the epoch mean") {
    auto t = make_topology(3, 2, Uniform{0.1, 1.9}, Exponential{2.0});
    add_complete_il(t);
    const Selection s{{}, {0, 3, 5}, 1};
    CHECK(expected_learning_time(t, s) == doctest::Approx(expectation(epoch_duration_pdf(t, s, 1))).epsilon(1e-12));
}

TEST_CASE("without i-l edges the epoch is the compute law") {
    const auto t = single();
    const Selection s{{}, {}, 1};
    const auto g = epoch_duration_pdf(t, s, 1);
    const DistributionSpec c(Exponential{1.0});
    CHECK(std::abs(expectation(g) - 1.0) < 1e-3);
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) CHECK(std::abs(g.cdf(x) - c.cdf(x)) < 1e-3);
    CHECK(std::abs(g.integral() - 1.0) < 1e-4);
}

TEST_CASE("compute time scales with the data on hand") {
    // X^0 = 100 and 100 new samples per epoch: epoch 2 computes on twice the data
    const auto t = single(100.0);
    const EdgeSet il{0};
    CHECK(compute_scale(t, il, 0, 1) == 1.0);
    CHECK(compute_scale(t, il, 0, 2) == 2.0);
    CHECK(compute_scale(t, il, 0, 4) == 4.0);
    CHECK(compute_scale(t, {}, 0, 4) == 1.0);

    const Selection s{{}, il, 2};
    const double e2 = expectation(epoch_duration_pdf(t, s, 2));
    CHECK(std::abs(e2 - 3.0) < 3e-3);  // Exp(1) wait plus compute of mean 2
    const double T = expected_learning_time(t, s);
    const auto mc = monte_carlo(t, s, 1'000'000, 5);
    CHECK(std::abs(T - mc.total_mean) <= 3.0 * mc.total_stderr);
    CHECK(std::abs(mc.epoch_mean[1] - e2) <= 3.0 * mc.epoch_stderr[1]);
}

TEST_CASE("missing offline data makes the compute law undefined") {
    auto t = single(10.0);
    t.l_nodes[0].initial_samples = 0.0;
    const Selection s{{}, {0}, 1};
    CHECK_THROWS_AS(epoch_duration_pdf(t, s, 1), ConfigurationError);
    CHECK_THROWS_AS(expected_learning_time(t, s), ConfigurationError);
    // a zero compute law needs no scale
    t.l_nodes[0].base_compute = PointMass{0.0};
    CHECK_NOTHROW(expected_learning_time(t, s));
}

TEST_CASE("ten l-nodes fed by five uniform i-nodes") {
    auto t = make_topology(10, 5, Uniform{0.1, 1.9}, Uniform{1.35, 1.65}, 100.0, 0.0);
    add_complete_il(t);
    const Selection s{{}, all_edges(t.il_candidates.size()), 1};
    const double grid = expectation(epoch_duration_pdf(t, s, 1));
    const auto mc = monte_carlo(t, s, 200'000, 99);
    CHECK(std::abs(grid - mc.total_mean) <= 3.0 * mc.total_stderr);
}

TEST_CASE("epoch mean does not drop as feeders are added") {
    auto t = make_topology(2, 4, Exponential{1.0}, Uniform{0.5, 1.5}, 100.0, 0.0);
    t.i_nodes[1].gen_time = Uniform{0.2, 2.5};
    t.i_nodes[3].gen_time = Exponential{0.7};
    add_complete_il(t);
    // candidates for l-node 0 are 0, 2, 4, 6
    EdgeSet il{1};
    double last = expectation(epoch_duration_pdf(t, {{}, il, 1}, 1));
    for (std::uint32_t e : {0u, 2u, 4u, 6u}) {
        il = with_edge(il, e);
        const double m = expectation(epoch_duration_pdf(t, {{}, il, 1}, 1));
        CHECK(m >= last - 1e-9);
        last = m;
    }
}

TEST_CASE("epoch pdfs are normalized and nonnegative") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto t = random_instance(3, 3, seed);
        PortableRng rng(seed * 31);
        EdgeSet il;
        for (std::uint32_t e = 0; e < t.il_candidates.size(); ++e)
            if (rng.uniform() < 0.4) il.push_back(e);
        for (long k = 1; k <= 3; ++k) {
            const auto g = epoch_duration_pdf(t, {{}, il, 3}, k);
            CHECK(std::abs(g.integral() - 1.0) < 1e-4);
            for (double v : g.values) CHECK(v >= -1e-12);
        }
    }
}
