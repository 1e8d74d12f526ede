#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netlearn/model.hpp"

namespace netlearn {

struct GanttEvent {
    std::string node;
    char kind = 'L';  // 'I' or 'L'
    long epoch = 0;
    double start = 0.0;
    double end = 0.0;
};

struct SimOptions {
    // One delivery draw per i-node and epoch, seen by every l-node it feeds.
    bool shared_draw = false;
};

struct Replication {
    double total = 0.0;
    std::vector<double> epoch_durations;
    std::vector<GanttEvent> events;
};

/// One run of the epoch protocol. Draws are keyed on (seed, replication,
/// epoch, node, edge), so any replication can be regenerated on its own.
Replication run_replication(const Topology& t, const Selection& s, std::uint64_t seed, std::uint64_t replication = 0,
                            const SimOptions& opt = {}, bool record_events = true);

struct SimStats {
    std::vector<double> epoch_mean;
    std::vector<double> epoch_stderr;
    double total_mean = 0.0;
    double total_stderr = 0.0;
    long reps = 0;
    std::uint64_t seed = 0;
    bool shared_draw = false;
};

inline constexpr long kMinReplications = 100;

/// Parallel over replication blocks; the result does not depend on the thread count.
SimStats monte_carlo(const Topology& t, const Selection& s, long reps, std::uint64_t seed, const SimOptions& opt = {});

/// Single-threaded reference with the same block structure.
SimStats monte_carlo_serial(const Topology& t, const Selection& s, long reps, std::uint64_t seed,
                            const SimOptions& opt = {});

/// Counter-based generator: SplitMix64 finalizer over a mixed key.
std::uint64_t stream_bits(std::uint64_t seed, std::uint64_t rep, std::uint64_t epoch, std::uint64_t kind,
                          std::uint64_t node, std::uint64_t edge);

/// Uniform draw in (0, 1) from the stream key.
double stream_uniform(std::uint64_t seed, std::uint64_t rep, std::uint64_t epoch, std::uint64_t kind,
                      std::uint64_t node, std::uint64_t edge);

}  // namespace netlearn
