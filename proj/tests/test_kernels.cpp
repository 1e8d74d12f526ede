#include <doctest.h>

#include <random>
#include <vector>

#include "netlearn/kernels.hpp"

using namespace netlearn;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(g() >> 11) * 0x1.0p-53;
    return v;
}

}  // namespace

TEST_CASE("parallel convolution does not depend on the thread count") {
    for (std::size_t n : {1u, 7u, 300u, 2048u, 5000u}) {
        const auto a = noise(n, n);
        const auto b = noise(n / 2 + 1, n + 1);
        const auto ref = kernels::convolve_serial(a, b);
        kernels::set_thread_budget(1);
        const auto one = kernels::convolve(a, b);
        REQUIRE(one.size() == ref.size());
        for (std::size_t j = 0; j < ref.size(); ++j) CHECK(one[j] == doctest::Approx(ref[j]).epsilon(1e-12));
        for (int threads : {2, 4}) {
            kernels::set_thread_budget(threads);
            CHECK(kernels::convolve(a, b) == one);
        }
    }
    kernels::set_thread_budget(1);
}

TEST_CASE("convolution of short sequences") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{0.5, 0.25};
    const auto c = kernels::convolve(a, b);
    const std::vector<double> expect{0.5, 1.25, 2.0, 0.75};
    REQUIRE(c.size() == expect.size());
    for (std::size_t j = 0; j < c.size(); ++j) CHECK(c[j] == doctest::Approx(expect[j]));
}

TEST_CASE("pointwise product matches the serial loop") {
    const auto f = noise(100000, 3);
    auto a = noise(100000, 4);
    auto b = a;
    kernels::set_thread_budget(4);
    kernels::multiply_into(a, f);
    kernels::multiply_into_serial(b, f);
    CHECK(a == b);
    kernels::set_thread_budget(1);
}

TEST_CASE("cumulative and differences invert each other") {
    const auto m = noise(1000, 9);
    const auto back = kernels::differences(kernels::cumulative(m));
    REQUIRE(back.size() == m.size());
    for (std::size_t j = 0; j < m.size(); ++j) CHECK(back[j] == doctest::Approx(m[j]).epsilon(1e-9));
    const std::vector<double> cdf{0.2, 0.5, 0.5 - 1e-17, 1.0};
    const auto d = kernels::differences(cdf);
    CHECK(d[2] == 0.0);
}

TEST_CASE("pairwise sum") {
    std::vector<double> v(1 << 20, 0.1);
    CHECK(kernels::pairwise_sum(v) == doctest::Approx(0.1 * (1 << 20)).epsilon(1e-14));
    CHECK(kernels::pairwise_sum(std::vector<double>{}) == 0.0);
}
