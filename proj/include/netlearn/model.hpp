#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netlearn/distribution.hpp"

namespace netlearn {

/// Learning node: computes gradients each epoch.
struct LNode {
    std::string id;
    double op_cost = 0.0;
    DistributionSpec base_compute;  // epoch compute time at X^0 samples
    double initial_samples = 0.0;   // X^0
};

/// Information node: delivers fresh samples each epoch.
struct INode {
    std::string id;
    double op_cost = 0.0;
    DistributionSpec gen_time;
    double rate = 0.0;  // expected samples per epoch
};

/// Candidate L-L cooperation link (unordered) between l-node indices a and b.
struct LLCandidate {
    std::size_t a = 0;
    std::size_t b = 0;
    double cost = 0.0;
};

/// Candidate I-L data link from i-node index `i` to l-node index `l`.
struct ILCandidate {
    std::size_t i = 0;
    std::size_t l = 0;
    double cost = 0.0;
};

struct Topology {
    std::vector<LNode> l_nodes;
    std::vector<INode> i_nodes;
    std::vector<LLCandidate> ll_candidates;
    std::vector<ILCandidate> il_candidates;
};

/// Sorted indices into a candidate list.
using EdgeSet = std::vector<std::uint32_t>;

struct Selection {
    EdgeSet ll_edges;
    EdgeSet il_edges;
    long epochs = 1;
};

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Node parameters that make a law undefined (e.g. X^0 = 0 with a compute law).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Returns `t` if every structural invariant holds, throws TopologyError otherwise.
const Topology& validate_topology(const Topology& t);

double spectral_gap(const Topology& t, const EdgeSet& ll_edges);

/// Expected samples at l-node `l` after `k` epochs of delivery.
double samples_at(const Topology& t, const EdgeSet& il_edges, std::size_t l, long k);

/// Number of samples averaged over epochs 1..K and all l-nodes.
double average_dataset_size(const Topology& t, const EdgeSet& il_edges, long K);

/// Sum of delivery rates reaching each l-node.
std::vector<double> inflow_rates(const Topology& t, const EdgeSet& il_edges);

/// I-node indices feeding each l-node, in ascending order.
std::vector<std::vector<std::size_t>> feeders(const Topology& t, const EdgeSet& il_edges);

std::size_t l_index(const Topology& t, const std::string& id);
std::size_t i_index(const Topology& t, const std::string& id);

EdgeSet with_edge(const EdgeSet& s, std::uint32_t e);
bool contains(const EdgeSet& s, std::uint32_t e);

}  // namespace netlearn
