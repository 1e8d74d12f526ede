#include "netlearn/learning.hpp"

#include <cmath>
#include <string>

namespace netlearn {

void validate_profile(const LearningProfile& p) {
    if (!std::isfinite(p.c1) || !std::isfinite(p.c2) || !std::isfinite(p.c3))
        throw std::invalid_argument("profile coefficients must be finite");
    if (p.c2 < 0.0) throw std::invalid_argument("profile needs c2 >= 0");
    if (!(p.eps_max > 0.0 && p.eps_max <= 1.0))
        throw std::invalid_argument("eps_max must lie in (0, 1], got " + std::to_string(p.eps_max));
    if (!(p.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
}

double predicted_error(long K, double gamma, double X, const LearningProfile& p) {
    if (K < 1) throw std::invalid_argument("predicted_error needs K >= 1");
    if (!(gamma > 0.0)) return std::numeric_limits<double>::infinity();
    const double arg = p.c3 + X;
    if (!(arg > 0.0)) throw std::domain_error("c3 + X must be positive, got " + std::to_string(arg));
    if (p.c2 == 0.0) return p.c1;
    return p.c1 + p.c2 * std::log(arg) / std::sqrt(static_cast<double>(K) * gamma);
}

EpochSearch min_epochs(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges,
                       const LearningProfile& p, long cap) {
    EpochSearch out;
    const double gamma = spectral_gap(t, ll_edges);
    if (!(gamma > 0.0)) {
        out.verdict = EpochVerdict::disconnected;
        return out;
    }
    // X(K) = x0 + beta (K + 1)
    const double x0 = average_dataset_size(t, {}, 1);
    const double beta = average_dataset_size(t, il_edges, 1) - x0 > 0.0
                            ? 0.5 * (average_dataset_size(t, il_edges, 1) - x0)
                            : 0.0;
    auto X = [&](long K) { return x0 + beta * static_cast<double>(K + 1); };
    auto ok = [&](long K) {
        ++out.law_evaluations;
        return predicted_error(K, gamma, X(K), p) <= p.eps_max;
    };
    auto found = [&](long K) {
        out.verdict = EpochVerdict::found;
        out.epochs = K;
        return out;
    };

    if (p.c2 == 0.0) {
        if (ok(1)) return found(1);
        out.verdict = EpochVerdict::error_floor;
        return out;
    }
    // ln(u)/sqrt(K) with u = c3 + X(K) decreases once ln u > 2 beta K / u, and
    // the condition keeps holding for larger K.
    auto decreasing = [&](long K) {
        const double u = p.c3 + X(K);
        return u > 0.0 && std::log(u) > 2.0 * beta * static_cast<double>(K) / u;
    };
    long km = cap + 1;
    if (decreasing(1)) {
        km = 1;
    } else if (decreasing(cap)) {
        long lo = 1;
        long hi = cap;
        while (hi - lo > 1) {
            const long mid = lo + (hi - lo) / 2;
            (decreasing(mid) ? hi : lo) = mid;
        }
        km = hi;
    }
    for (long K = 1; K < km && K <= cap; ++K)
        if (ok(K)) return found(K);
    if (km > cap) {
        out.verdict = p.eps_max <= p.c1 ? EpochVerdict::error_floor : EpochVerdict::cap_exceeded;
        return out;
    }
    if (ok(km)) return found(km);
    if (p.eps_max <= p.c1) {
        out.verdict = EpochVerdict::error_floor;
        return out;
    }
    long lo = km;  // infeasible
    long step = 1;
    long hi = km + step;
    while (hi <= cap && !ok(hi)) {
        lo = hi;
        step *= 2;
        hi = km + step;
    }
    if (hi > cap) {
        if (!ok(cap)) {
            out.verdict = EpochVerdict::cap_exceeded;
            return out;
        }
        hi = cap;
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return found(hi);
}

CostSplit per_epoch_cost_split(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges) {
    CostSplit c;
    for (const auto& n : t.l_nodes) c.ll += n.op_cost;
    for (auto e : ll_edges) c.ll += t.ll_candidates.at(e).cost;
    std::vector<bool> used(t.i_nodes.size(), false);
    for (auto e : il_edges) {
        const auto& cand = t.il_candidates.at(e);
        c.il += cand.cost;
        used[cand.i] = true;
    }
    for (std::size_t i = 0; i < used.size(); ++i)
        if (used[i]) c.il += t.i_nodes[i].op_cost;
    return c;
}

double per_epoch_cost(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges) {
    return per_epoch_cost_split(t, ll_edges, il_edges).total();
}

double total_cost(const Topology& t, const Selection& s) {
    return static_cast<double>(s.epochs) * per_epoch_cost(t, s.ll_edges, s.il_edges);
}

EvaluationResult evaluate(const Topology& t, const EdgeSet& ll_edges, const EdgeSet& il_edges,
                          const LearningProfile& p, const EvaluateOptions& opt) {
    EvaluationResult r;
    r.gamma = spectral_gap(t, ll_edges);
    r.split = per_epoch_cost_split(t, ll_edges, il_edges);
    r.per_epoch_cost = r.split.total();
    const auto search = min_epochs(t, ll_edges, il_edges, p, opt.epoch_cap);
    r.verdict = search.verdict;
    if (!search.found()) {
        r.epochs = opt.epoch_cap;
        r.error = search.verdict == EpochVerdict::disconnected
                      ? std::numeric_limits<double>::infinity()
                      : predicted_error(opt.epoch_cap, r.gamma, average_dataset_size(t, il_edges, opt.epoch_cap), p);
        r.g1 = p.eps_max / r.error;
        r.margin = r.g1;
        r.cost = static_cast<double>(r.epochs) * r.per_epoch_cost;
        r.feasible = false;
        return r;
    }
    r.epochs = search.epochs;
    r.error = predicted_error(r.epochs, r.gamma, average_dataset_size(t, il_edges, r.epochs), p);
    r.g1 = p.eps_max / r.error;
    r.cost = static_cast<double>(r.epochs) * r.per_epoch_cost;
    Selection s{ll_edges, il_edges, r.epochs};
    r.time = expected_learning_time(t, s, opt.engine);
    r.g2 = r.time > 0.0 ? p.t_max / r.time : std::numeric_limits<double>::infinity();
    r.margin = std::min(r.g1, r.g2);
    r.feasible = r.margin >= 1.0;
    return r;
}

}  // namespace netlearn
