#include "netlearn/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>
#include <utility>

#include <Eigen/Dense>

namespace netlearn {

namespace {

bool law_nonnegative(const DistributionSpec& d) { return d.support_lo() >= 0.0; }

void check_cost(double c, const std::string& what) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw TopologyError(what + ": cost must be a finite nonnegative number, got " +
                            std::to_string(c));
}

}  // namespace

const Topology& validate_topology(const Topology& t) {
    if (t.l_nodes.empty()) throw TopologyError("topology has no l-nodes");

    std::unordered_set<std::string> ids;
    for (const auto& n : t.l_nodes) {
        if (!ids.insert(n.id).second) throw TopologyError("duplicate node id '" + n.id + "'");
        check_cost(n.op_cost, "l-node '" + n.id + "' op_cost");
        if (!(n.initial_samples >= 0.0))
            throw TopologyError("l-node '" + n.id + "': initial_samples must be >= 0");
        if (!law_nonnegative(n.base_compute))
            throw TopologyError("l-node '" + n.id + "': compute law has negative support");
    }
    for (const auto& n : t.i_nodes) {
        if (!ids.insert(n.id).second) throw TopologyError("duplicate node id '" + n.id + "'");
        check_cost(n.op_cost, "i-node '" + n.id + "' op_cost");
        if (!(n.rate >= 0.0)) throw TopologyError("i-node '" + n.id + "': rate must be >= 0");
        if (!law_nonnegative(n.gen_time))
            throw TopologyError("i-node '" + n.id + "': gen_time law has negative support");
    }

    const std::size_t nl = t.l_nodes.size();
    const std::size_t ni = t.i_nodes.size();
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < t.ll_candidates.size(); ++e) {
        const auto& c = t.ll_candidates[e];
        const std::string name = "ll edge #" + std::to_string(e);
        if (c.a >= nl) throw TopologyError(name + " references unknown l-node index " + std::to_string(c.a));
        if (c.b >= nl) throw TopologyError(name + " references unknown l-node index " + std::to_string(c.b));
        if (c.a == c.b) throw TopologyError(name + " is a self-loop on '" + t.l_nodes[c.a].id + "'");
        check_cost(c.cost, name);
        if (!seen.insert(std::minmax(c.a, c.b)).second)
            throw TopologyError(name + " duplicates the pair ('" + t.l_nodes[c.a].id + "', '" +
                                t.l_nodes[c.b].id + "')");
    }
    seen.clear();
    for (std::size_t e = 0; e < t.il_candidates.size(); ++e) {
        const auto& c = t.il_candidates[e];
        const std::string name = "il edge #" + std::to_string(e);
        if (c.i >= ni) throw TopologyError(name + " references unknown i-node index " + std::to_string(c.i));
        if (c.l >= nl) throw TopologyError(name + " references unknown l-node index " + std::to_string(c.l));
        check_cost(c.cost, name);
        if (!seen.insert({c.i, c.l}).second)
            throw TopologyError(name + " duplicates the pair ('" + t.i_nodes[c.i].id + "', '" +
                                t.l_nodes[c.l].id + "')");
    }
    return t;
}

double spectral_gap(const Topology& t, const EdgeSet& ll_edges) {
    const auto n = static_cast<Eigen::Index>(t.l_nodes.size());
    if (n == 1) return 1.0;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (auto e : ll_edges) {
        const auto& c = t.ll_candidates.at(e);
        p(static_cast<Eigen::Index>(c.a), static_cast<Eigen::Index>(c.b)) = 1.0;
        p(static_cast<Eigen::Index>(c.b), static_cast<Eigen::Index>(c.a)) = 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(p, Eigen::EigenvaluesOnly);
    std::vector<double> moduli(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) moduli[static_cast<std::size_t>(k)] = std::abs(solver.eigenvalues()(k));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    const double gap = moduli[0] - moduli[1];
    return gap < 1e-9 ? 0.0 : gap;
}

std::vector<double> inflow_rates(const Topology& t, const EdgeSet& il_edges) {
    std::vector<double> r(t.l_nodes.size(), 0.0);
    for (auto e : il_edges) {
        const auto& c = t.il_candidates.at(e);
        r[c.l] += t.i_nodes[c.i].rate;
    }
    return r;
}

std::vector<std::vector<std::size_t>> feeders(const Topology& t, const EdgeSet& il_edges) {
    std::vector<std::vector<std::size_t>> f(t.l_nodes.size());
    for (auto e : il_edges) {
        const auto& c = t.il_candidates.at(e);
        f[c.l].push_back(c.i);
    }
    for (auto& v : f) std::sort(v.begin(), v.end());
    return f;
}

double samples_at(const Topology& t, const EdgeSet& il_edges, std::size_t l, long k) {
    if (l >= t.l_nodes.size()) throw TopologyError("unknown l-node index " + std::to_string(l));
    double inflow = 0.0;
    for (auto e : il_edges) {
        const auto& c = t.il_candidates.at(e);
        if (c.l == l) inflow += t.i_nodes[c.i].rate;
    }
    return t.l_nodes[l].initial_samples + static_cast<double>(k) * inflow;
}

double average_dataset_size(const Topology& t, const EdgeSet& il_edges, long K) {
    double x0 = 0.0;
    for (const auto& n : t.l_nodes) x0 += n.initial_samples;
    double inflow = 0.0;
    for (auto e : il_edges) inflow += t.i_nodes[t.il_candidates.at(e).i].rate;
    const double nl = static_cast<double>(t.l_nodes.size());
    return x0 / nl + 0.5 * static_cast<double>(K + 1) * inflow / nl;
}

std::size_t l_index(const Topology& t, const std::string& id) {
    for (std::size_t k = 0; k < t.l_nodes.size(); ++k)
        if (t.l_nodes[k].id == id) return k;
    throw TopologyError("unknown l-node id '" + id + "'");
}

std::size_t i_index(const Topology& t, const std::string& id) {
    for (std::size_t k = 0; k < t.i_nodes.size(); ++k)
        if (t.i_nodes[k].id == id) return k;
    throw TopologyError("unknown i-node id '" + id + "'");
}

EdgeSet with_edge(const EdgeSet& s, std::uint32_t e) {
    EdgeSet out;
    out.reserve(s.size() + 1);
    auto it = std::lower_bound(s.begin(), s.end(), e);
    out.insert(out.end(), s.begin(), it);
    if (it == s.end() || *it != e) out.push_back(e);
    out.insert(out.end(), it, s.end());
    return out;
}

bool contains(const EdgeSet& s, std::uint32_t e) { return std::binary_search(s.begin(), s.end(), e); }

}  // namespace netlearn
