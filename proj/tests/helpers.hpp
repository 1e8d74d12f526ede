#pragma once

// Instance builders and independent oracles shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "netlearn/learning.hpp"
#include "netlearn/model.hpp"
#include "netlearn/rng.hpp"

namespace testing_support {

using namespace netlearn;

inline Topology make_topology(std::size_t nl, std::size_t ni, const DistributionSpec& gen,
                              const DistributionSpec& compute, double x0 = 100.0, double rate = 10.0) {
    Topology t;
    for (std::size_t l = 0; l < nl; ++l) t.l_nodes.push_back({"L" + std::to_string(l), 0.0, compute, x0});
    for (std::size_t i = 0; i < ni; ++i) t.i_nodes.push_back({"I" + std::to_string(i), 0.0, gen, rate});
    return t;
}

inline void add_complete_ll(Topology& t, double cost = 1.0) {
    for (std::size_t a = 0; a < t.l_nodes.size(); ++a)
        for (std::size_t b = a + 1; b < t.l_nodes.size(); ++b) t.ll_candidates.push_back({a, b, cost});
}

inline void add_complete_il(Topology& t, double cost = 1.0) {
    for (std::size_t i = 0; i < t.i_nodes.size(); ++i)
        for (std::size_t l = 0; l < t.l_nodes.size(); ++l) t.il_candidates.push_back({i, l, cost});
}

inline EdgeSet all_edges(std::size_t n) {
    EdgeSet s(n);
    for (std::size_t e = 0; e < n; ++e) s[e] = static_cast<std::uint32_t>(e);
    return s;
}

/// Scenario-shaped random instance: U(0,1) link costs, U(10,100) rates,
/// exponential mean 1 times, every i-l pair a candidate.
inline Topology random_instance(std::size_t nl, std::size_t ni, std::uint64_t seed, double x0 = 100.0) {
    PortableRng rng(seed);
    Topology t;
    for (std::size_t l = 0; l < nl; ++l)
        t.l_nodes.push_back({"L" + std::to_string(l), 0.0, Exponential{1.0}, x0});
    for (std::size_t i = 0; i < ni; ++i)
        t.i_nodes.push_back({"I" + std::to_string(i), 0.0, Exponential{1.0}, rng.uniform(10.0, 100.0)});
    for (std::size_t a = 0; a < nl; ++a)
        for (std::size_t b = a + 1; b < nl; ++b) t.ll_candidates.push_back({a, b, rng.uniform()});
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t l = 0; l < nl; ++l) t.il_candidates.push_back({i, l, rng.uniform()});
    return t;
}

/// Direct evaluation of the error law with long double arithmetic.
inline double error_law(long double K, long double gamma, long double X, long double c1, long double c2,
                        long double c3) {
    return static_cast<double>(c1 + c2 * std::log(c3 + X) / std::sqrt(K * gamma));
}

/// Linear scan oracle for the minimal epoch count.
inline long linear_scan_epochs(const Topology& t, const EdgeSet& ll, const EdgeSet& il, const LearningProfile& p,
                               long cap) {
    const double gamma = spectral_gap(t, ll);
    for (long K = 1; K <= cap; ++K) {
        const double X = average_dataset_size(t, il, K);
        if (error_law(K, gamma, X, p.c1, p.c2, p.c3) <= p.eps_max) return K;
    }
    return -1;
}

inline std::vector<EdgeSet> subsets(std::size_t n) {
    std::vector<EdgeSet> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        EdgeSet s;
        for (std::uint32_t e = 0; e < n; ++e)
            if (m >> e & 1u) s.push_back(e);
        out.push_back(s);
    }
    return out;
}

/// Every d-regular subgraph of the candidate graph, by exhaustive enumeration.
inline std::vector<EdgeSet> regular_subgraphs(const Topology& t, int d) {
    std::vector<EdgeSet> out;
    for (const auto& s : subsets(t.ll_candidates.size())) {
        std::vector<int> deg(t.l_nodes.size(), 0);
        for (auto e : s) {
            ++deg[t.ll_candidates[e].a];
            ++deg[t.ll_candidates[e].b];
        }
        if (std::all_of(deg.begin(), deg.end(), [&](int x) { return x == d; })) out.push_back(s);
    }
    return out;
}

inline double edge_cost(const Topology& t, const EdgeSet& ll) {
    double c = 0.0;
    for (auto e : ll) c += t.ll_candidates[e].cost;
    return c;
}

}  // namespace testing_support
