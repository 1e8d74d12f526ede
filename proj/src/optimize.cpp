#include "netlearn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "netlearn/kernels.hpp"

namespace netlearn {

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::none: return "none";
        case EdgeKind::ll_graph: return "ll_graph";
        case EdgeKind::il: return "il";
        case EdgeKind::skip: return "skip";
    }
    return "none";
}

GreedyResult greedy_submodular(std::size_t ground_size, const SetFunction& f, const SetFunction& g,
                               double threshold) {
    GreedyResult out;
    std::vector<bool> taken(ground_size, false);
    double fs = f(out.selected);
    double gs = g(out.selected);
    while (gs < threshold) {
        std::size_t pick = ground_size;
        double best_ratio = 0.0;
        double best_cost = 0.0;
        double best_f = 0.0;
        double best_g = 0.0;
        for (std::size_t j = 0; j < ground_size; ++j) {
            if (taken[j]) continue;
            auto s = out.selected;
            s.push_back(j);
            const double gj = g(s);
            const double benefit = gj - gs;
            if (!(benefit > kBenefitTolerance)) continue;
            const double fj = f(s);
            const double cost = fj - fs;
            const double ratio = cost / benefit;
            if (pick == ground_size || ratio < best_ratio || (ratio == best_ratio && cost < best_cost)) {
                pick = j;
                best_ratio = ratio;
                best_cost = cost;
                best_f = fj;
                best_g = gj;
            }
        }
        if (pick == ground_size) break;
        taken[pick] = true;
        out.selected.push_back(pick);
        out.benefits.push_back(best_g - gs);
        fs = best_f;
        gs = best_g;
    }
    out.feasible = gs >= threshold;
    return out;
}

namespace {

bool parity_ok(std::size_t n, int d) {
    if (d == 0) return n == 1;
    return d >= 1 && static_cast<std::size_t>(d) < n && (n * static_cast<std::size_t>(d)) % 2 == 0;
}

// Error-only margin; an upper bound on the full margin.
double error_margin(const Topology& t, const EdgeSet& ll, const EdgeSet& il, const LearningProfile& p, long cap) {
    const auto s = min_epochs(t, ll, il, p, cap);
    if (s.verdict == EpochVerdict::disconnected) return 0.0;
    const long K = s.found() ? s.epochs : cap;
    return p.eps_max / predicted_error(K, spectral_gap(t, ll), average_dataset_size(t, il, K), p);
}

TraceEntry entry(long step, int d_L, EdgeKind kind, long edge, const EvaluationResult& r) {
    return {step, d_L, kind, edge, r.cost, r.margin, r.g1, r.g2, r.feasible};
}

Solution make_solution(const EdgeSet& ll, const EdgeSet& il, const EvaluationResult& r, int d_L) {
    return {Selection{ll, il, r.epochs}, r, r.feasible, d_L};
}

bool cheaper(const EvaluationResult& r, const std::optional<Solution>& best) {
    return r.feasible && (!best || r.cost < best->result.cost);
}

}  // namespace

OptimizeResult double_climb(const Topology& t, const LearningProfile& p, const OptimizeOptions& opt) {
    validate_profile(p);
    OptimizeResult out;
    const std::size_t nl = t.l_nodes.size();
    const std::size_t nil = t.il_candidates.size();
    long step = 0;
    for (int d : uniform_degrees(nl)) {
        std::optional<EdgeSet> ll;
        if (parity_ok(nl, d)) ll = cheapest_uniform(t, d);
        if (!ll) {
            out.trace.push_back({step++, d, EdgeKind::skip, -1, 0.0, 0.0, 0.0, 0.0, false});
            continue;
        }
        EdgeSet il;
        auto cur = evaluate(t, *ll, il, p, opt.eval);
        ++out.evaluations;
        out.trace.push_back(entry(step++, d, EdgeKind::ll_graph, -1, cur));

        while (!cur.feasible) {
            std::vector<std::uint32_t> open;
            for (std::uint32_t e = 0; e < nil; ++e)
                if (!contains(il, e)) open.push_back(e);
            if (open.empty()) break;
            out.evaluations += static_cast<long>(open.size());
            std::vector<std::optional<EvaluationResult>> res(open.size());
            const long n_open = static_cast<long>(open.size());
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_budget()) if (n_open > 1)
            for (long j = 0; j < n_open; ++j) {
                const auto next = with_edge(il, open[static_cast<std::size_t>(j)]);
                if (error_margin(t, *ll, next, p, opt.eval.epoch_cap) - cur.margin <= kBenefitTolerance) continue;
                res[static_cast<std::size_t>(j)] = evaluate(t, *ll, next, p, opt.eval);
            }
            std::size_t pick = open.size();
            double best_ratio = 0.0;
            double best_cost = 0.0;
            for (std::size_t j = 0; j < open.size(); ++j) {
                if (!res[j]) continue;
                const double benefit = res[j]->margin - cur.margin;
                if (!(benefit > kBenefitTolerance)) continue;
                const double cost = t.il_candidates[open[j]].cost;
                const double ratio = cost / benefit;
                if (pick == open.size() || ratio < best_ratio || (ratio == best_ratio && cost < best_cost)) {
                    pick = j;
                    best_ratio = ratio;
                    best_cost = cost;
                }
            }
            if (pick == open.size()) break;
            il = with_edge(il, open[pick]);
            cur = *res[pick];
            out.trace.push_back(entry(step++, d, EdgeKind::il, open[pick], cur));
        }

        if (cheaper(cur, out.best)) {
            out.best = make_solution(*ll, il, cur, d);
        } else if (opt.stop_rule && cur.feasible && out.best) {
            const auto K = static_cast<double>(cur.epochs);
            const auto Kb = static_cast<double>(out.best->result.epochs);
            if (K * cur.split.ll > Kb * out.best->result.split.ll && K * cur.split.il > Kb * out.best->result.split.il)
                break;
        }
    }
    return out;
}

OptimizeResult opt_unif(const Topology& t, const LearningProfile& p, const OptimizeOptions& opt) {
    validate_profile(p);
    OptimizeResult out;
    const std::size_t nl = t.l_nodes.size();
    // i-l candidates of every l-node in ascending (cost, index) order
    std::vector<std::vector<std::uint32_t>> by_node(nl);
    for (std::uint32_t e = 0; e < t.il_candidates.size(); ++e) by_node[t.il_candidates[e].l].push_back(e);
    for (auto& v : by_node)
        std::stable_sort(v.begin(), v.end(),
                         [&](auto a, auto b) { return t.il_candidates[a].cost < t.il_candidates[b].cost; });
    long step = 0;
    for (int d : uniform_degrees(nl)) {
        std::optional<EdgeSet> ll;
        if (parity_ok(nl, d)) ll = cheapest_uniform(t, d);
        if (!ll) {
            out.trace.push_back({step++, d, EdgeKind::skip, -1, 0.0, 0.0, 0.0, 0.0, false});
            continue;
        }
        for (std::size_t di = 0; di <= t.i_nodes.size(); ++di) {
            EdgeSet il;
            bool possible = true;
            for (const auto& v : by_node) {
                if (v.size() < di) {
                    possible = false;
                    break;
                }
                il.insert(il.end(), v.begin(), v.begin() + static_cast<long>(di));
            }
            if (!possible) break;
            std::sort(il.begin(), il.end());
            const auto r = evaluate(t, *ll, il, p, opt.eval);
            ++out.evaluations;
            out.trace.push_back(entry(step++, d, di == 0 ? EdgeKind::ll_graph : EdgeKind::il,
                                      static_cast<long>(di), r));
            if (cheaper(r, out.best)) out.best = make_solution(*ll, il, r, d);
        }
    }
    return out;
}

OptimizeResult brute_force(const Topology& t, const LearningProfile& p, const BruteForceLimits& limits,
                           const OptimizeOptions& opt) {
    validate_profile(p);
    const std::size_t nl = t.l_nodes.size();
    const std::size_t nil = t.il_candidates.size();
    std::vector<std::pair<int, EdgeSet>> graphs;
    for (int d : uniform_degrees(nl))
        if (parity_ok(nl, d))
            if (auto ll = cheapest_uniform(t, d)) graphs.emplace_back(d, std::move(*ll));
    const double states = static_cast<double>(graphs.size()) * std::ldexp(1.0, static_cast<int>(nil));
    if (nil >= 60 || states > limits.max_states)
        throw SearchTooLarge("brute force would enumerate " + std::to_string(states) + " states, limit is " +
                             std::to_string(limits.max_states));

    struct Candidate {
        double cost;
        std::size_t graph;
        std::uint64_t mask;
    };
    std::vector<Candidate> order;
    OptimizeResult out;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const auto& ll = graphs[gi].second;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nil); ++mask) {
            EdgeSet il;
            for (std::uint32_t e = 0; e < nil; ++e)
                if (mask >> e & 1u) il.push_back(e);
            ++out.evaluations;
            const auto s = min_epochs(t, ll, il, p, opt.eval.epoch_cap);
            if (!s.found()) continue;
            order.push_back({static_cast<double>(s.epochs) * per_epoch_cost(t, ll, il), gi, mask});
        }
    }
    // The error constraint alone is settled; check time in ascending cost.
    std::stable_sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
    // With c2 >= 0, K and every epoch duration are non-decreasing in the i-l
    // set, so supersets of a deadline-infeasible set can be skipped.
    std::vector<std::vector<std::uint64_t>> late(graphs.size());
    long step = 0;
    for (const auto& c : order) {
        const auto& bad = late[c.graph];
        if (std::any_of(bad.begin(), bad.end(), [&](std::uint64_t m) { return (c.mask & m) == m; })) continue;
        EdgeSet il;
        for (std::uint32_t e = 0; e < nil; ++e)
            if (c.mask >> e & 1u) il.push_back(e);
        const auto& [d, ll] = graphs[c.graph];
        const auto r = evaluate(t, ll, il, p, opt.eval);
        out.trace.push_back(entry(step++, d, EdgeKind::none, static_cast<long>(c.mask), r));
        if (r.feasible) {
            out.best = make_solution(ll, il, r, d);
            break;
        }
        late[c.graph].push_back(c.mask);
    }
    return out;
}

}  // namespace netlearn
