#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "netlearn/optimize.hpp"

namespace netlearn {

namespace {

class RegularBuilder {
public:
    RegularBuilder(const Topology& t, int d)
        : t_(t), n_(t.l_nodes.size()), d_(d), deg_(n_, 0), chosen_(t.ll_candidates.size(), false),
          pair_(n_ * n_, kNone) {
        for (std::size_t e = 0; e < t.ll_candidates.size(); ++e) {
            const auto& c = t.ll_candidates[e];
            pair_[c.a * n_ + c.b] = e;
            pair_[c.b * n_ + c.a] = e;
        }
        order_.resize(t.ll_candidates.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](auto a, auto b) { return t.ll_candidates[a].cost < t.ll_candidates[b].cost; });
    }

    std::optional<EdgeSet> run() {
        for (auto e : order_) {
            const auto& c = t_.ll_candidates[e];
            if (deg_[c.a] < d_ && deg_[c.b] < d_) set(e, true);
        }
        const long budget = 10 * static_cast<long>(n_ * n_);
        for (long it = 0; it < budget && !regular(); ++it)
            if (!repair_step()) break;
        if (!regular()) return exact();
        for (long it = 0; it < budget; ++it)
            if (!improve_step()) break;
        return edges();
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    double cost(std::size_t e) const { return t_.ll_candidates[e].cost; }
    std::size_t edge(std::size_t u, std::size_t v) const { return u == v ? kNone : pair_[u * n_ + v]; }
    bool free(std::size_t u, std::size_t v) const {
        const auto e = edge(u, v);
        return e != kNone && !chosen_[e];
    }

    void set(std::size_t e, bool on) {
        chosen_[e] = on;
        const int s = on ? 1 : -1;
        deg_[t_.ll_candidates[e].a] += s;
        deg_[t_.ll_candidates[e].b] += s;
    }

    bool regular() const {
        return std::all_of(deg_.begin(), deg_.end(), [&](int x) { return x == d_; });
    }

    EdgeSet edges() const {
        EdgeSet s;
        for (std::size_t e = 0; e < chosen_.size(); ++e)
            if (chosen_[e]) s.push_back(static_cast<std::uint32_t>(e));
        return s;
    }

    // Adds a free edge between two deficient nodes, or swaps a chosen (x,y)
    // for (u,x) + (v,y) where u, v are deficient; cheapest option first.
    bool repair_step() {
        double best = std::numeric_limits<double>::infinity();
        std::size_t add1 = kNone, add2 = kNone, drop = kNone;
        for (std::size_t u = 0; u < n_; ++u) {
            if (deg_[u] >= d_) continue;
            for (std::size_t v = u + 1; v < n_; ++v)
                if (deg_[v] < d_ && free(u, v) && cost(edge(u, v)) < best) {
                    best = cost(edge(u, v));
                    add1 = edge(u, v);
                    add2 = drop = kNone;
                }
        }
        if (add1 != kNone) {
            set(add1, true);
            return true;
        }
        for (std::size_t u = 0; u < n_; ++u) {
            if (deg_[u] >= d_) continue;
            for (std::size_t v = u; v < n_; ++v) {
                if (deg_[v] >= d_ || (u == v && d_ - deg_[u] < 2)) continue;
                for (std::size_t e = 0; e < chosen_.size(); ++e) {
                    if (!chosen_[e]) continue;
                    const auto x0 = t_.ll_candidates[e].a;
                    const auto y0 = t_.ll_candidates[e].b;
                    for (int flip = 0; flip < 2; ++flip) {
                        const auto x = flip ? y0 : x0;
                        const auto y = flip ? x0 : y0;
                        if (x == u || y == v || !free(u, x) || !free(v, y) || edge(u, x) == edge(v, y)) continue;
                        const double delta = cost(edge(u, x)) + cost(edge(v, y)) - cost(e);
                        if (delta < best) {
                            best = delta;
                            add1 = edge(u, x);
                            add2 = edge(v, y);
                            drop = e;
                        }
                    }
                }
            }
        }
        if (add1 == kNone) return false;
        set(drop, false);
        set(add1, true);
        set(add2, true);
        return true;
    }

    // Replaces chosen (a,b), (c,e) with (a,c), (b,e) or (a,e), (b,c) when cheaper.
    bool improve_step() {
        double best = -1e-12;
        std::size_t r1 = kNone, r2 = kNone, a1 = kNone, a2 = kNone;
        for (std::size_t e = 0; e < chosen_.size(); ++e) {
            if (!chosen_[e]) continue;
            for (std::size_t f = e + 1; f < chosen_.size(); ++f) {
                if (!chosen_[f]) continue;
                const auto a = t_.ll_candidates[e].a, b = t_.ll_candidates[e].b;
                const auto c = t_.ll_candidates[f].a, g = t_.ll_candidates[f].b;
                const std::pair<std::size_t, std::size_t> opts[2][2] = {{{a, c}, {b, g}}, {{a, g}, {b, c}}};
                for (const auto& o : opts) {
                    if (!free(o[0].first, o[0].second) || !free(o[1].first, o[1].second)) continue;
                    const auto x = edge(o[0].first, o[0].second);
                    const auto y = edge(o[1].first, o[1].second);
                    if (x == y) continue;
                    const double delta = cost(x) + cost(y) - cost(e) - cost(f);
                    if (delta < best) {
                        best = delta;
                        r1 = e;
                        r2 = f;
                        a1 = x;
                        a2 = y;
                    }
                }
            }
        }
        if (r1 == kNone) return false;
        set(r1, false);
        set(r2, false);
        set(a1, true);
        set(a2, true);
        return true;
    }

    // Bounded branch and bound over candidate edges in cost order.
    std::optional<EdgeSet> exact() {
        std::fill(deg_.begin(), deg_.end(), 0);
        std::fill(chosen_.begin(), chosen_.end(), false);
        std::vector<int> remaining(n_, 0);  // unvisited candidates touching each node
        for (const auto& c : t_.ll_candidates) {
            ++remaining[c.a];
            ++remaining[c.b];
        }
        best_cost_ = std::numeric_limits<double>::infinity();
        best_.clear();
        nodes_ = 0;
        search(0, 0.0, remaining);
        if (std::isinf(best_cost_)) return std::nullopt;
        return best_;
    }

    void search(std::size_t k, double acc, std::vector<int>& remaining) {
        if (++nodes_ > kNodeBudget || acc >= best_cost_) return;
        if (regular()) {
            best_cost_ = acc;
            best_ = edges();
            return;
        }
        if (k == order_.size()) return;
        for (std::size_t u = 0; u < n_; ++u)
            if (deg_[u] + remaining[u] < d_) return;
        const auto e = order_[k];
        const auto& c = t_.ll_candidates[e];
        --remaining[c.a];
        --remaining[c.b];
        if (deg_[c.a] < d_ && deg_[c.b] < d_) {
            set(e, true);
            search(k + 1, acc + c.cost, remaining);
            set(e, false);
        }
        search(k + 1, acc, remaining);
        ++remaining[c.a];
        ++remaining[c.b];
    }

    static constexpr long kNodeBudget = 2'000'000;

    const Topology& t_;
    std::size_t n_;
    int d_;
    std::vector<int> deg_;
    std::vector<bool> chosen_;
    std::vector<std::size_t> pair_;
    std::vector<std::size_t> order_;
    double best_cost_ = 0.0;
    EdgeSet best_;
    long nodes_ = 0;
};

}  // namespace

std::optional<EdgeSet> cheapest_uniform(const Topology& t, int d) {
    const std::size_t n = t.l_nodes.size();
    if (d == 0) return EdgeSet{};
    if (d < 1 || static_cast<std::size_t>(d) >= n || (n * static_cast<std::size_t>(d)) % 2 != 0) return std::nullopt;
    return RegularBuilder(t, d).run();
}

std::vector<int> uniform_degrees(std::size_t n) {
    if (n == 1) return {0};
    std::vector<int> out;
    for (std::size_t d = 1; d < n; ++d) out.push_back(static_cast<int>(d));
    return out;
}

}  // namespace netlearn
