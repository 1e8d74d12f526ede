#include "netlearn/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netlearn/epoch_time.hpp"
#include "netlearn/kernels.hpp"

namespace netlearn {

std::uint64_t stream_bits(std::uint64_t seed, std::uint64_t rep, std::uint64_t epoch, std::uint64_t kind,
                          std::uint64_t node, std::uint64_t edge) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed);
    for (std::uint64_t part : {rep, epoch, kind, node, edge}) h = mix(h ^ part);
    return h;
}

double stream_uniform(std::uint64_t seed, std::uint64_t rep, std::uint64_t epoch, std::uint64_t kind,
                      std::uint64_t node, std::uint64_t edge) {
    return (static_cast<double>(stream_bits(seed, rep, epoch, kind, node, edge) >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

constexpr std::uint64_t kDelivery = 0;
constexpr std::uint64_t kCompute = 1;
constexpr std::uint64_t kShared = ~std::uint64_t{0};
constexpr long kBlock = 1024;

struct Feed {
    std::size_t i;
    std::uint32_t edge;
};

struct Plan {
    std::vector<std::vector<Feed>> feeds;  // per l-node
    std::vector<double> scale;             // [(k-1) * |L| + l]
    long epochs = 1;
};

Plan make_plan(const Topology& t, const Selection& s) {
    if (s.epochs < 1) throw std::invalid_argument("selection needs at least one epoch");
    const std::size_t nl = t.l_nodes.size();
    Plan p;
    p.epochs = s.epochs;
    p.feeds.resize(nl);
    for (auto e : s.il_edges) {
        const auto& c = t.il_candidates.at(e);
        p.feeds[c.l].push_back({c.i, e});
    }
    for (const auto& n : t.l_nodes)
        if (!n.base_compute.is_zero() && !(n.initial_samples > 0.0))
            throw ConfigurationError("l-node '" + n.id +
                                     "' has no initial samples, so its compute time cannot be scaled");
    const auto inflow = inflow_rates(t, s.il_edges);
    p.scale.assign(static_cast<std::size_t>(s.epochs) * nl, 1.0);
    for (long k = 1; k <= s.epochs; ++k)
        for (std::size_t l = 0; l < nl; ++l)
            if (inflow[l] > 0.0) p.scale[static_cast<std::size_t>(k - 1) * nl + l] = compute_scale(t, s.il_edges, l, k);
    return p;
}

// Duration of every epoch of one replication written to `out`; events are
// appended when `events` is non-null.
double replicate(const Topology& t, const Plan& p, std::uint64_t seed, std::uint64_t rep, const SimOptions& opt,
                 std::span<double> out, std::vector<GanttEvent>* events) {
    const std::size_t nl = t.l_nodes.size();
    const std::size_t ni = t.i_nodes.size();
    std::vector<double> shared(opt.shared_draw ? ni : 0);
    std::vector<bool> used(opt.shared_draw ? ni : 0, false);
    double clock = 0.0;
    for (long k = 1; k <= p.epochs; ++k) {
        const auto ek = static_cast<std::uint64_t>(k);
        if (opt.shared_draw) {
            std::fill(used.begin(), used.end(), false);
            for (const auto& f : p.feeds)
                for (const auto& x : f) used[x.i] = true;
            for (std::size_t i = 0; i < ni; ++i) {
                if (!used[i]) continue;
                shared[i] = t.i_nodes[i].gen_time.sample(stream_uniform(seed, rep, ek, kDelivery, i, kShared));
                if (events) events->push_back({t.i_nodes[i].id, 'I', k, clock, clock + shared[i]});
            }
        }
        double epoch_end = clock;
        for (std::size_t l = 0; l < nl; ++l) {
            double ready = 0.0;
            for (const auto& x : p.feeds[l]) {
                const double d = opt.shared_draw
                                     ? shared[x.i]
                                     : t.i_nodes[x.i].gen_time.sample(stream_uniform(seed, rep, ek, kDelivery, x.i, x.edge));
                if (events && !opt.shared_draw) events->push_back({t.i_nodes[x.i].id, 'I', k, clock, clock + d});
                ready = std::max(ready, d);
            }
            const double c = p.scale[static_cast<std::size_t>(k - 1) * nl + l] *
                             t.l_nodes[l].base_compute.sample(stream_uniform(seed, rep, ek, kCompute, l, 0));
            if (events) events->push_back({t.l_nodes[l].id, 'L', k, clock + ready, clock + ready + c});
            epoch_end = std::max(epoch_end, clock + ready + c);
        }
        out[static_cast<std::size_t>(k - 1)] = epoch_end - clock;
        clock = epoch_end;
    }
    return clock;
}

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    static Moments merge(const Moments& a, const Moments& b) {
        if (a.n == 0.0) return b;
        if (b.n == 0.0) return a;
        Moments r;
        r.n = a.n + b.n;
        const double d = b.mean - a.mean;
        r.mean = a.mean + d * (b.n / r.n);
        r.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / r.n);
        return r;
    }
    double stderr_of_mean() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

// Block b holds [total, epoch 1, ..., epoch K] moments.
std::vector<Moments> run_block(const Topology& t, const Plan& p, std::uint64_t seed, long first, long count,
                               const SimOptions& opt) {
    std::vector<Moments> m(static_cast<std::size_t>(p.epochs) + 1);
    std::vector<double> dur(static_cast<std::size_t>(p.epochs));
    for (long r = first; r < first + count; ++r) {
        m[0].add(replicate(t, p, seed, static_cast<std::uint64_t>(r), opt, dur, nullptr));
        for (std::size_t k = 0; k < dur.size(); ++k) m[k + 1].add(dur[k]);
    }
    return m;
}

std::vector<Moments> merge_range(const std::vector<std::vector<Moments>>& blocks, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return blocks[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    auto a = merge_range(blocks, lo, mid);
    const auto b = merge_range(blocks, mid, hi);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = Moments::merge(a[j], b[j]);
    return a;
}

SimStats summarize(const std::vector<std::vector<Moments>>& blocks, long reps, std::uint64_t seed,
                   const SimOptions& opt) {
    const auto m = merge_range(blocks, 0, blocks.size());
    SimStats s;
    s.reps = reps;
    s.seed = seed;
    s.shared_draw = opt.shared_draw;
    s.total_mean = m[0].mean;
    s.total_stderr = m[0].stderr_of_mean();
    for (std::size_t k = 1; k < m.size(); ++k) {
        s.epoch_mean.push_back(m[k].mean);
        s.epoch_stderr.push_back(m[k].stderr_of_mean());
    }
    return s;
}

void check_reps(long reps) {
    if (reps < kMinReplications)
        throw std::invalid_argument("monte carlo needs at least " + std::to_string(kMinReplications) +
                                    " replications, got " + std::to_string(reps));
}

}  // namespace

Replication run_replication(const Topology& t, const Selection& s, std::uint64_t seed, std::uint64_t replication,
                            const SimOptions& opt, bool record_events) {
    const auto p = make_plan(t, s);
    Replication r;
    r.epoch_durations.resize(static_cast<std::size_t>(p.epochs));
    r.total = replicate(t, p, seed, replication, opt, r.epoch_durations, record_events ? &r.events : nullptr);
    return r;
}

SimStats monte_carlo(const Topology& t, const Selection& s, long reps, std::uint64_t seed, const SimOptions& opt) {
    check_reps(reps);
    const auto p = make_plan(t, s);
    const long nb = (reps + kBlock - 1) / kBlock;
    std::vector<std::vector<Moments>> blocks(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_budget()) if (nb > 1)
    for (long b = 0; b < nb; ++b) {
        const long first = b * kBlock;
        blocks[static_cast<std::size_t>(b)] = run_block(t, p, seed, first, std::min(kBlock, reps - first), opt);
    }
    return summarize(blocks, reps, seed, opt);
}

SimStats monte_carlo_serial(const Topology& t, const Selection& s, long reps, std::uint64_t seed,
                            const SimOptions& opt) {
    check_reps(reps);
    const auto p = make_plan(t, s);
    std::vector<std::vector<Moments>> blocks;
    for (long first = 0; first < reps; first += kBlock)
        blocks.push_back(run_block(t, p, seed, first, std::min(kBlock, reps - first), opt));
    return summarize(blocks, reps, seed, opt);
}

}  // namespace netlearn
