#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace netlearn {

// mt19937_64 with hand-rolled conversions; the standard distributions are not
// reproducible across library implementations.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : gen_(seed) {}
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

private:
    std::mt19937_64 gen_;
};

}  // namespace netlearn
