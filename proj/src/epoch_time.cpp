#include "netlearn/epoch_time.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "netlearn/kernels.hpp"

namespace netlearn {

double compute_scale(const Topology& t, const EdgeSet& il_edges, std::size_t l, long k) {
    const auto& node = t.l_nodes.at(l);
    if (node.base_compute.is_zero()) return 1.0;
    if (!(node.initial_samples > 0.0))
        throw ConfigurationError("l-node '" + node.id +
                                 "' has no initial samples, so its compute time cannot be scaled");
    return samples_at(t, il_edges, l, k - 1) / node.initial_samples;
}

namespace {

// Lattice CDF of one l-node's epoch time on nodes j*dt, j in [first, first + cdf.size()).
struct NodeLattice {
    long first = 0;
    std::vector<double> cdf;
};

long node_at(double t, double dt) { return std::lround(t / dt); }

std::vector<double> masses_on(const DistributionSpec& d, long first, long last, double dt, double cut) {
    return lattice_masses(d, static_cast<double>(first) * dt, dt, static_cast<std::size_t>(last - first + 1),
                          cut);
}

NodeLattice node_lattice(const Topology& t, const std::vector<std::size_t>& feeders, std::size_t l,
                         double scale, double dt, double cut) {
    const DistributionSpec compute = scaled(t.l_nodes[l].base_compute, scale);
    const long c_first = node_at(compute.support_lo(), dt);
    const long c_last = node_at(compute.support_hi(cut), dt);
    auto comp = masses_on(compute, c_first, c_last, dt, cut);
    if (feeders.empty()) return {c_first, kernels::cumulative(comp)};

    double glo = 0.0;
    double ghi = 0.0;
    for (auto i : feeders) {
        glo = std::max(glo, t.i_nodes[i].gen_time.support_lo());
        ghi = std::max(ghi, t.i_nodes[i].gen_time.support_hi(cut));
    }
    const long g_first = node_at(glo, dt);
    const long g_last = std::max(g_first, node_at(ghi, dt));
    std::vector<double> ready(static_cast<std::size_t>(g_last - g_first + 1), 1.0);
    for (auto i : feeders)
        kernels::multiply_into(ready, kernels::cumulative(masses_on(t.i_nodes[i].gen_time, g_first, g_last, dt, cut)));
    ready.back() = 1.0;
    const auto wait = kernels::differences(ready);
    return {g_first + c_first, kernels::cumulative(kernels::convolve(wait, comp))};
}

struct EpochLattice {
    long first = 0;
    double dt = 1.0;
    std::vector<double> masses;
};

EpochLattice epoch_lattice(const Topology& t, const std::vector<std::vector<std::size_t>>& feed,
                           const std::vector<double>& scales, const EngineOptions& opt) {
    if (opt.resolution < 64) throw std::invalid_argument("grid resolution must be at least 64 points");
    const std::size_t nl = t.l_nodes.size();
    // Support of the slowest node's time bounds the grid.
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t l = 0; l < nl; ++l) {
        const auto& c = t.l_nodes[l].base_compute;
        double glo = 0.0;
        double ghi = 0.0;
        for (auto i : feed[l]) {
            glo = std::max(glo, t.i_nodes[i].gen_time.support_lo());
            ghi = std::max(ghi, t.i_nodes[i].gen_time.support_hi(opt.quantile_cut));
        }
        lo = std::max(lo, glo + scales[l] * c.support_lo());
        hi = std::max(hi, ghi + scales[l] * c.support_hi(opt.quantile_cut));
    }
    double dt = (hi - lo) / static_cast<double>(opt.resolution - 1);
    if (!(dt > 0.0)) dt = std::max(hi, 1.0) / static_cast<double>(opt.resolution - 1);

    std::vector<NodeLattice> nodes;
    nodes.reserve(nl);
    long first = 0;
    long last = 0;
    for (std::size_t l = 0; l < nl; ++l) {
        nodes.push_back(node_lattice(t, feed[l], l, scales[l], dt, opt.quantile_cut));
        const auto& n = nodes.back();
        const long n_last = n.first + static_cast<long>(n.cdf.size()) - 1;
        if (l == 0) {
            first = n.first;
            last = n_last;
        } else {
            first = std::max(first, n.first);
            last = std::max(last, n_last);
        }
    }
    std::vector<double> prod(static_cast<std::size_t>(last - first + 1), 1.0);
    for (const auto& n : nodes) {
        const long n_last = n.first + static_cast<long>(n.cdf.size()) - 1;
        const long stop = std::min(last, n_last);
        for (long j = first; j <= stop; ++j) prod[static_cast<std::size_t>(j - first)] *= n.cdf[static_cast<std::size_t>(j - n.first)];
    }
    prod.back() = 1.0;
    return {first, dt, kernels::differences(prod)};
}

std::vector<double> scales_at(const Topology& t, const EdgeSet& il, const std::vector<double>& inflow, long k) {
    std::vector<double> s(t.l_nodes.size());
    for (std::size_t l = 0; l < s.size(); ++l) s[l] = inflow[l] > 0.0 ? compute_scale(t, il, l, k) : 1.0;
    return s;
}

void check_scalable(const Topology& t) {
    for (const auto& n : t.l_nodes)
        if (!n.base_compute.is_zero() && !(n.initial_samples > 0.0))
            throw ConfigurationError("l-node '" + n.id +
                                     "' has no initial samples, so its compute time cannot be scaled");
}

}  // namespace

GridFunction epoch_duration_pdf(const Topology& t, const Selection& s, long k, const EngineOptions& opt) {
    if (k < 1) throw std::invalid_argument("epoch index must be >= 1");
    check_scalable(t);
    const auto feed = feeders(t, s.il_edges);
    const auto inflow = inflow_rates(t, s.il_edges);
    const auto e = epoch_lattice(t, feed, scales_at(t, s.il_edges, inflow, k), opt);
    if (e.masses.size() == 1) return GridFunction{static_cast<double>(e.first) * e.dt, 1.0, {1.0}};
    return GridFunction::from_masses(static_cast<double>(e.first) * e.dt, e.dt, e.masses);
}

double expected_learning_time(const Topology& t, const Selection& s, const EngineOptions& opt) {
    if (s.epochs < 1) throw std::invalid_argument("selection needs at least one epoch");
    check_scalable(t);
    const auto feed = feeders(t, s.il_edges);
    const auto inflow = inflow_rates(t, s.il_edges);
    const bool constant = std::all_of(inflow.begin(), inflow.end(), [](double r) { return r == 0.0; });
    std::vector<double> per_epoch;
    per_epoch.reserve(constant ? 1 : static_cast<std::size_t>(s.epochs));
    for (long k = 1; k <= s.epochs; ++k) {
        const auto e = epoch_lattice(t, feed, scales_at(t, s.il_edges, inflow, k), opt);
        double mean = 0.0;
        for (std::size_t j = 0; j < e.masses.size(); ++j)
            mean += e.masses[j] * static_cast<double>(e.first + static_cast<long>(j)) * e.dt;
        if (constant) return mean * static_cast<double>(s.epochs);
        per_epoch.push_back(mean);
    }
    return kernels::pairwise_sum(per_epoch);
}

}  // namespace netlearn
