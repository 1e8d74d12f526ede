#pragma once

#include <cstddef>

#include "netlearn/distribution.hpp"
#include "netlearn/model.hpp"

namespace netlearn {

struct EngineOptions {
    std::size_t resolution = kDefaultResolution;
    double quantile_cut = kDefaultQuantileCut;
};

/// Compute-time multiplier of l-node `l` at epoch k >= 1: data available when
/// the epoch starts over the offline data, X^{k-1}_l / X^0_l.
double compute_scale(const Topology& t, const EdgeSet& il_edges, std::size_t l, long k);

/// Pdf of the duration of epoch k (global barrier over all l-nodes).
GridFunction epoch_duration_pdf(const Topology& t, const Selection& s, long k,
                                const EngineOptions& opt = {});

/// Expected total duration of `s.epochs` epochs.
double expected_learning_time(const Topology& t, const Selection& s, const EngineOptions& opt = {});

}  // namespace netlearn
