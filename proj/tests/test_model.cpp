#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "helpers.hpp"

using namespace netlearn;
using namespace testing_support;

namespace {

Topology two_by_one() {
    auto t = make_topology(2, 1, Exponential{1.0}, Exponential{1.0});
    t.ll_candidates.push_back({0, 1, 0.5});
    t.il_candidates.push_back({0, 0, 0.3});
    return t;
}

EdgeSet cycle(Topology& t, std::size_t n) {
    EdgeSet s;
    for (std::size_t a = 0; a < n; ++a) {
        t.ll_candidates.push_back({a, (a + 1) % n, 1.0});
        s.push_back(static_cast<std::uint32_t>(a));
    }
    return s;
}

}  // namespace

TEST_CASE("valid topology passes through unchanged") {
    const auto t = two_by_one();
    CHECK(&validate_topology(t) == &t);
}

TEST_CASE("invalid topologies are rejected with the offending element") {
    SUBCASE("negative link cost") {
        auto t = two_by_one();
        t.ll_candidates[0].cost = -0.1;
        CHECK_THROWS_AS(validate_topology(t), TopologyError);
    }
    SUBCASE("dangling endpoint") {
        auto t = two_by_one();
        t.il_candidates.push_back({3, 0, 0.1});
        CHECK_THROWS_WITH_AS(validate_topology(t), doctest::Contains("unknown i-node index 3"), TopologyError);
    }
    SUBCASE("duplicate id") {
        auto t = two_by_one();
        t.i_nodes[0].id = "L0";
        CHECK_THROWS_WITH_AS(validate_topology(t), doctest::Contains("'L0'"), TopologyError);
    }
    SUBCASE("self loop") {
        auto t = two_by_one();
        t.ll_candidates.push_back({1, 1, 0.1});
        CHECK_THROWS_AS(validate_topology(t), TopologyError);
    }
    SUBCASE("repeated i-l pair") {
        auto t = two_by_one();
        t.il_candidates.push_back({0, 0, 0.2});
        CHECK_THROWS_AS(validate_topology(t), TopologyError);
    }
    SUBCASE("no l-nodes") {
        Topology t;
        CHECK_THROWS_AS(validate_topology(t), TopologyError);
    }
}

TEST_CASE("spectral gap of reference graphs") {
    SUBCASE("complete graph on ten nodes") {
        auto t = make_topology(10, 0, Exponential{1.0}, Exponential{1.0});
        add_complete_ll(t);
        CHECK(spectral_gap(t, all_edges(t.ll_candidates.size())) == doctest::Approx(8.0).epsilon(1e-12));
    }
    SUBCASE("five-cycle") {
        auto t = make_topology(5, 0, Exponential{1.0}, Exponential{1.0});
        const auto c = cycle(t, 5);
        CHECK(spectral_gap(t, c) == doctest::Approx(2.0 - 2.0 * std::abs(std::cos(4.0 * M_PI / 5.0))).epsilon(1e-12));
    }
    SUBCASE("no edges") {
        auto t = make_topology(4, 0, Exponential{1.0}, Exponential{1.0});
        add_complete_ll(t);
        CHECK(spectral_gap(t, {}) == 0.0);
    }
    SUBCASE("single l-node") {
        auto t = make_topology(1, 0, Exponential{1.0}, Exponential{1.0});
        CHECK(spectral_gap(t, {}) == 1.0);
    }
    SUBCASE("bipartite regular graphs have eigenvalues +-d") {
        auto t = make_topology(4, 0, Exponential{1.0}, Exponential{1.0});
        const auto c = cycle(t, 4);
        CHECK(spectral_gap(t, c) == 0.0);
    }
}

TEST_CASE("samples and average dataset size") {
    auto t = make_topology(1, 2, Exponential{1.0}, Exponential{1.0}, 0.0, 10.0);
    t.il_candidates.push_back({0, 0, 0.0});
    t.il_candidates.push_back({1, 0, 0.0});
    CHECK(samples_at(t, {0}, 0, 3) == 30.0);
    t.l_nodes[0].initial_samples = 50.0;
    CHECK(samples_at(t, {}, 0, 7) == 50.0);
    t.l_nodes[0].initial_samples = 7.0;
    t.i_nodes[1].rate = 5.0;
    CHECK(samples_at(t, {0, 1}, 0, 2) == 37.0);

    t.l_nodes[0].initial_samples = 0.0;
    CHECK(average_dataset_size(t, {0}, 4) == doctest::Approx(25.0));
    CHECK(average_dataset_size(t, {}, 9) == 0.0);

    auto u = make_topology(2, 1, Exponential{1.0}, Exponential{1.0}, 0.0, 10.0);
    u.il_candidates.push_back({0, 0, 0.0});
    // (1/6)(10 + 20 + 30) from expanding the double sum
    CHECK(average_dataset_size(u, {0}, 3) == doctest::Approx(10.0));
    CHECK_THROWS_AS(samples_at(u, {0}, 5, 1), TopologyError);
}

TEST_CASE("spectral gap is invariant under relabeling") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + trial % 6;
        auto t = make_topology(n, 0, Exponential{1.0}, Exponential{1.0});
        add_complete_ll(t);
        EdgeSet s;
        for (std::uint32_t e = 0; e < t.ll_candidates.size(); ++e)
            if (gen() % 2) s.push_back(e);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), gen);
        auto r = t;
        for (auto& c : r.ll_candidates) {
            c.a = perm[c.a];
            c.b = perm[c.b];
        }
        CHECK(spectral_gap(r, s) == doctest::Approx(spectral_gap(t, s)).epsilon(1e-9));
    }
}

TEST_CASE("adding an l-l edge moves the leading modulus by at most one") {
    auto leading = [](const Topology& t, const EdgeSet& s) {
        const auto n = static_cast<Eigen::Index>(t.l_nodes.size());
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        for (auto e : s) {
            p(static_cast<Eigen::Index>(t.ll_candidates[e].a), static_cast<Eigen::Index>(t.ll_candidates[e].b)) = 1.0;
            p(static_cast<Eigen::Index>(t.ll_candidates[e].b), static_cast<Eigen::Index>(t.ll_candidates[e].a)) = 1.0;
        }
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p).eigenvalues().cwiseAbs().maxCoeff();
    };
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 8;
        auto t = make_topology(n, 0, Exponential{1.0}, Exponential{1.0});
        add_complete_ll(t);
        EdgeSet s;
        for (std::uint32_t e = 0; e < t.ll_candidates.size(); ++e)
            if (gen() % 3 == 0) s.push_back(e);
        const auto e = static_cast<std::uint32_t>(gen() % t.ll_candidates.size());
        if (contains(s, e)) continue;
        const auto s2 = with_edge(s, e);
        CHECK(std::abs(leading(t, s2) - leading(t, s)) <= 1.0 + 1e-9);
        CHECK(spectral_gap(t, s) >= 0.0);
        CHECK(spectral_gap(t, s2) >= 0.0);
    }
}

TEST_CASE("samples are additive over disjoint i-l edge sets") {
    auto t = make_topology(2, 3, Exponential{1.0}, Exponential{1.0}, 4.0, 10.0);
    t.i_nodes[1].rate = 3.0;
    t.i_nodes[2].rate = 8.5;
    add_complete_il(t);
    const EdgeSet a{0, 3};
    const EdgeSet b{2, 4};
    EdgeSet ab{0, 2, 3, 4};
    for (std::size_t l = 0; l < 2; ++l)
        for (long k = 0; k < 5; ++k)
            CHECK(samples_at(t, ab, l, k) - t.l_nodes[l].initial_samples ==
                  doctest::Approx(samples_at(t, a, l, k) + samples_at(t, b, l, k) - 2 * t.l_nodes[l].initial_samples));
}

TEST_CASE("average dataset size is affine in K") {
    auto t = make_topology(3, 2, Exponential{1.0}, Exponential{1.0}, 12.0, 20.0);
    add_complete_il(t);
    const EdgeSet il{1, 4};
    const double step = average_dataset_size(t, il, 2) - average_dataset_size(t, il, 1);
    CHECK(step > 0.0);
    for (long K = 2; K < 40; ++K)
        CHECK(average_dataset_size(t, il, K + 1) - average_dataset_size(t, il, K) == doctest::Approx(step));
    CHECK(average_dataset_size(t, {}, 40) == doctest::Approx(12.0));
}
