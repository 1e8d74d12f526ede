#include "netlearn/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace netlearn::kernels {

namespace {

int g_budget = 0;  // 0: not yet resolved

int resolve_budget() {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("NETLEARN_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) n = std::min(n, cap);
        } catch (...) {
            // unparsable value: keep the OpenMP default
        }
    }
    return std::max(1, n);
}

// Work below this many multiply-adds stays on one thread.
constexpr std::size_t kParallelWork = 1u << 16;

}  // namespace

int thread_budget() {
    if (g_budget == 0) g_budget = resolve_budget();
    return g_budget;
}

void set_thread_budget(int n) { g_budget = std::max(1, n); }

std::vector<double> convolve_serial(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    // Reversed short operand makes the inner product unit-stride in both arrays.
    std::vector<double> rb(b.rbegin(), b.rend());
    const std::size_t n_out = na + nb - 1;
    std::vector<double> out(n_out);
    const double* pa = a.data();
    const double* pr = rb.data();
    const bool parallel = na * nb >= kParallelWork && thread_budget() > 1;

#pragma omp parallel for schedule(static) num_threads(thread_budget()) if (parallel)
    for (std::size_t n = 0; n < n_out; ++n) {
        // out[n] = sum_m a[m] * b[n - m], m in [lo, hi]
        const std::size_t lo = n + 1 > nb ? n + 1 - nb : 0;
        const std::size_t hi = std::min(n, na - 1);
        const double* x = pa + lo;
        const double* y = pr + (nb - 1 - (n - lo));
        const std::size_t len = hi - lo + 1;
        double s = 0.0;
#pragma omp simd reduction(+ : s)
        for (std::size_t m = 0; m < len; ++m) s += x[m] * y[m];
        out[n] = s;
    }
    return out;
}

void multiply_into_serial(std::span<double> acc, std::span<const double> f) {
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] *= f[j];
}

void multiply_into(std::span<double> acc, std::span<const double> f) {
    const std::size_t n = acc.size();
    double* pa = acc.data();
    const double* pf = f.data();
#pragma omp parallel for simd schedule(static) num_threads(thread_budget()) if (n >= kParallelWork)
    for (std::size_t j = 0; j < n; ++j) pa[j] *= pf[j];
}

std::vector<double> cumulative(std::span<const double> masses) {
    std::vector<double> c(masses.size());
    double s = 0.0;
    for (std::size_t j = 0; j < masses.size(); ++j) {
        s += masses[j];
        c[j] = s;
    }
    return c;
}

std::vector<double> differences(std::span<const double> cdf) {
    std::vector<double> m(cdf.size());
    double prev = 0.0;
    for (std::size_t j = 0; j < cdf.size(); ++j) {
        m[j] = std::max(0.0, cdf[j] - prev);
        prev = cdf[j];
    }
    return m;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace netlearn::kernels
