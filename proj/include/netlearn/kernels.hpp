#pragma once

// Data-parallel inner loops of the grid engine. Each kernel has a plain serial
// reference used by the tests and the benchmark. The parallel versions compute
// every output element with a fixed summation order, so their results do not
// depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace netlearn::kernels {

/// Full discrete convolution, out.size() == a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);
std::vector<double> convolve_serial(std::span<const double> a, std::span<const double> b);

/// acc[j] *= f[j] for every j.
void multiply_into(std::span<double> acc, std::span<const double> f);
void multiply_into_serial(std::span<double> acc, std::span<const double> f);

/// Running sum of masses, i.e. the lattice CDF.
std::vector<double> cumulative(std::span<const double> masses);

/// First differences of a CDF with an implicit leading zero; tiny negatives
/// from rounding are clamped.
std::vector<double> differences(std::span<const double> cdf);

/// Sum with pairwise splitting; order depends only on the length.
double pairwise_sum(std::span<const double> v);

/// Number of threads the parallel kernels may use (NETLEARN_THREADS caps it).
int thread_budget();
void set_thread_budget(int n);

}  // namespace netlearn::kernels
