#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "netlearn/optimize.hpp"
#include "netlearn/rng.hpp"

namespace netlearn {

namespace {

using Genome = std::vector<unsigned char>;

using Rng = PortableRng;

EdgeSet decode(const Genome& g) {
    EdgeSet s;
    for (std::size_t e = 0; e < g.size(); ++e)
        if (g[e]) s.push_back(static_cast<std::uint32_t>(e));
    return s;
}

class Fitness {
public:
    Fitness(const Topology& t, const LearningProfile& p, const EdgeSet& ll, const EvaluateOptions& eval)
        : t_(t), p_(p), ll_(ll), eval_(eval) {
        EdgeSet all(t.il_candidates.size());
        for (std::size_t e = 0; e < all.size(); ++e) all[e] = static_cast<std::uint32_t>(e);
        // Any infeasible individual scores below every feasible one.
        c_max_ = static_cast<double>(eval.epoch_cap) * per_epoch_cost(t, ll, all);
        if (!(c_max_ > 0.0)) c_max_ = 1.0;
    }

    double operator()(const Genome& g) {
        auto it = memo_.find(g);
        if (it != memo_.end()) return it->second;
        ++evaluations;
        const auto il = decode(g);
        double f = 0.0;
        if (std::isinf(p_.t_max)) {
            // Without a deadline the learning time cannot change the score.
            const auto s = min_epochs(t_, ll_, il, p_, eval_.epoch_cap);
            if (s.found()) {
                f = -static_cast<double>(s.epochs) * per_epoch_cost(t_, ll_, il);
            } else {
                const double g1 = s.verdict == EpochVerdict::disconnected
                                      ? 0.0
                                      : p_.eps_max / predicted_error(eval_.epoch_cap, spectral_gap(t_, ll_),
                                                                     average_dataset_size(t_, il, eval_.epoch_cap), p_);
                f = -c_max_ * (2.0 - std::min(g1, 1.0));
            }
        } else {
            const auto r = evaluate(t_, ll_, il, p_, eval_);
            f = r.feasible ? -r.cost : -c_max_ * (2.0 - std::min(r.margin, 1.0));
        }
        memo_.emplace(g, f);
        return f;
    }

    long evaluations = 0;

private:
    const Topology& t_;
    const LearningProfile& p_;
    const EdgeSet& ll_;
    EvaluateOptions eval_;
    double c_max_ = 1.0;
    std::map<Genome, double> memo_;
};

}  // namespace

EdgeSet ga_inner(const Topology& t, const LearningProfile& p, const EdgeSet& ll_edges, const GaParams& params,
                 std::uint64_t seed, const EvaluateOptions& eval, long* evaluations) {
    if (params.population < 1 || params.parents_mating < 1 || params.parents_mating > params.population ||
        params.generations < 0 || params.tournament < 1 || !(params.mutation_prob >= 0.0 && params.mutation_prob <= 1.0))
        throw std::invalid_argument("invalid genetic algorithm parameters");
    const std::size_t genes = t.il_candidates.size();
    Rng rng(seed);
    Fitness fitness(t, p, ll_edges, eval);

    std::vector<Genome> pop(static_cast<std::size_t>(params.population), Genome(genes, 0));
    for (auto& g : pop)
        for (auto& b : g) b = rng.uniform() < 0.5;

    Genome best;
    double best_fit = -std::numeric_limits<double>::infinity();
    auto score = [&](const std::vector<Genome>& v) {
        std::vector<double> f(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            f[j] = fitness(v[j]);
            if (f[j] > best_fit) {
                best_fit = f[j];
                best = v[j];
            }
        }
        return f;
    };

    auto fit = score(pop);
    for (int gen = 0; gen < params.generations; ++gen) {
        std::vector<Genome> parents;
        for (int m = 0; m < params.parents_mating; ++m) {
            std::size_t w = rng.below(pop.size());
            for (int r = 1; r < params.tournament; ++r) {
                const std::size_t c = rng.below(pop.size());
                if (fit[c] > fit[w]) w = c;
            }
            parents.push_back(pop[w]);
        }
        std::vector<Genome> next = parents;
        for (std::size_t k = 0; next.size() < pop.size(); ++k) {
            const auto& a = parents[k % parents.size()];
            const auto& b = parents[(k + 1) % parents.size()];
            const std::size_t cut = genes == 0 ? 0 : rng.below(genes + 1);
            Genome child(genes);
            for (std::size_t e = 0; e < genes; ++e) child[e] = e < cut ? a[e] : b[e];
            for (auto& bit : child)
                if (rng.uniform() < params.mutation_prob) bit = !bit;
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        fit = score(pop);
    }
    if (evaluations) *evaluations += fitness.evaluations;
    return decode(best);
}

OptimizeResult genetic(const Topology& t, const LearningProfile& p, const GaParams& params, std::uint64_t seed,
                       const OptimizeOptions& opt) {
    validate_profile(p);
    OptimizeResult out;
    const std::size_t nl = t.l_nodes.size();
    long step = 0;
    for (int d : uniform_degrees(nl)) {
        std::optional<EdgeSet> ll;
        if ((nl * static_cast<std::size_t>(d)) % 2 == 0) ll = cheapest_uniform(t, d);
        if (!ll) {
            out.trace.push_back({step++, d, EdgeKind::skip, -1, 0.0, 0.0, 0.0, 0.0, false});
            continue;
        }
        const auto il = ga_inner(t, p, *ll, params, seed + static_cast<std::uint64_t>(d), opt.eval, &out.evaluations);
        const auto r = evaluate(t, *ll, il, p, opt.eval);
        out.trace.push_back({step++, d, EdgeKind::ll_graph, -1, r.cost, r.margin, r.g1, r.g2, r.feasible});
        if (r.feasible && (!out.best || r.cost < out.best->result.cost))
            out.best = Solution{Selection{*ll, il, r.epochs}, r, true, d};
    }
    return out;
}

}  // namespace netlearn
