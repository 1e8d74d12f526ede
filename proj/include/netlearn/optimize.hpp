#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netlearn/learning.hpp"
#include "netlearn/model.hpp"

namespace netlearn {

enum class EdgeKind { none, ll_graph, il, skip };

const char* to_string(EdgeKind k);

struct TraceEntry {
    long step = 0;
    int d_L = 0;
    EdgeKind edge_kind = EdgeKind::none;
    long edge_id = -1;  // il candidate index; -1 when not applicable
    double cost = 0.0;
    double g = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    bool feasible = false;
};

struct Solution {
    Selection selection;
    EvaluationResult result;
    bool feasible = false;
    int d_L = 0;
};

struct OptimizeResult {
    std::optional<Solution> best;  // empty when nothing feasible was found
    std::vector<TraceEntry> trace;
    long evaluations = 0;          // candidate selections examined
    bool feasible() const { return best.has_value() && best->feasible; }
};

struct OptimizeOptions {
    EvaluateOptions eval;
    bool stop_rule = true;  // DoubleClimb early exit
};

// Generic greedy for submodular cover.

struct GreedyResult {
    std::vector<std::size_t> selected;  // in insertion order
    bool feasible = false;
    std::vector<double> benefits;       // marginal benefit of each inserted element
};

using SetFunction = std::function<double(const std::vector<std::size_t>&)>;

/// Adds the element with the smallest marginal cost / marginal benefit among
/// elements with positive benefit until g(S) >= threshold or no element helps.
/// Ties: lower ratio, then lower marginal cost, then lower index.
GreedyResult greedy_submodular(std::size_t ground_size, const SetFunction& f, const SetFunction& g,
                               double threshold);

inline constexpr double kBenefitTolerance = 1e-12;

/// Cheapest d-regular subgraph of the L-L candidate graph (heuristic).
/// d = 0 gives the empty graph.
std::optional<EdgeSet> cheapest_uniform(const Topology& t, int d);

/// Uniform degrees the outer loops visit: 1..n-1, or just 0 for a single l-node.
std::vector<int> uniform_degrees(std::size_t n);

OptimizeResult double_climb(const Topology& t, const LearningProfile& p, const OptimizeOptions& opt = {});

OptimizeResult opt_unif(const Topology& t, const LearningProfile& p, const OptimizeOptions& opt = {});

struct GaParams {
    int generations = 50;
    int population = 100;
    int parents_mating = 4;
    double mutation_prob = 0.15;
    int tournament = 3;
};

/// Best i-l subset found by the genetic search for the uniform graph of degree d_L.
EdgeSet ga_inner(const Topology& t, const LearningProfile& p, const EdgeSet& ll_edges, const GaParams& params,
                 std::uint64_t seed, const EvaluateOptions& eval = {}, long* evaluations = nullptr);

/// GA over i-l edges for each feasible d_L; returns the cheapest feasible result.
OptimizeResult genetic(const Topology& t, const LearningProfile& p, const GaParams& params, std::uint64_t seed,
                       const OptimizeOptions& opt = {});

class SearchTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

struct BruteForceLimits {
    double max_states = 1 << 22;
};

/// Exhaustive search over uniform degrees and all i-l subsets.
OptimizeResult brute_force(const Topology& t, const LearningProfile& p, const BruteForceLimits& limits = {},
                           const OptimizeOptions& opt = {});

}  // namespace netlearn
