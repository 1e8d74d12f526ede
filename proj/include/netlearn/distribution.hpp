#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace netlearn {

struct Uniform {
    double a = 0.0;
    double b = 1.0;
    bool operator==(const Uniform&) const = default;
};

struct Exponential {
    double rate = 1.0;
    bool operator==(const Exponential&) const = default;
};

/// Density sampled at t0, t0+dt, ...; piecewise linear between samples.
struct GriddedDensity {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> density;
    bool operator==(const GriddedDensity&) const = default;
};

/// Degenerate law, used for deterministic scenarios.
struct PointMass {
    double at = 0.0;
    bool operator==(const PointMass&) const = default;
};

/// A nonnegative random-variable law.
class DistributionSpec {
public:
    using Variant = std::variant<Uniform, Exponential, GriddedDensity, PointMass>;

    DistributionSpec() : law_(PointMass{0.0}) {}
    DistributionSpec(Uniform u);
    DistributionSpec(Exponential e);
    DistributionSpec(GriddedDensity g);
    DistributionSpec(PointMass p);

    const Variant& law() const { return law_; }

    double cdf(double t) const;
    double quantile(double p) const;
    double mean() const;
    /// Inverse-CDF draw for u in (0,1).
    double sample(double u) const;

    double support_lo() const;
    /// Upper end of the support; exponential laws are cut at `quantile_cut`.
    double support_hi(double quantile_cut) const;
    /// True if the law is a point mass at zero (nothing to scale).
    bool is_zero() const;

    bool operator==(const DistributionSpec& other) const;

private:
    Variant law_;
    std::vector<double> gridded_cdf_;  // cumulative mass at grid nodes
};

DistributionSpec scaled(const DistributionSpec& d, double factor);

/// A sampled real function of time. For pdfs, node j carries lattice mass
/// w_j * values[j] * dt with trapezoid weights w (1/2 at the two ends), so the
/// trapezoid integral equals the total lattice mass.
struct GridFunction {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double t(std::size_t j) const { return t0 + dt * static_cast<double>(j); }
    double integral() const;
    std::vector<double> masses() const;
    static GridFunction from_masses(double t0, double dt, std::span<const double> masses);
    /// CDF of the lattice law with each node's mass spread over its cell.
    double cdf(double t) const;
};

inline constexpr std::size_t kDefaultResolution = 4096;
inline constexpr double kDefaultQuantileCut = 1.0 - 1e-9;

GridFunction to_grid(const DistributionSpec& d,
                     std::size_t resolution = kDefaultResolution,
                     double quantile_cut = kDefaultQuantileCut);

GridFunction max_of_independent(std::span<const DistributionSpec> dists,
                                std::size_t resolution = kDefaultResolution,
                                double quantile_cut = kDefaultQuantileCut);

GridFunction convolve(const GridFunction& p1, const GridFunction& p2);

/// Trapezoid-rule integral of t * p(t).
double expectation(const GridFunction& p);

/// Lattice masses of `d` on nodes t0 + j*dt, j < count. Node j receives the
/// probability of its cell [t_j - dt/2, t_j + dt/2); the two end nodes also
/// absorb whatever lies beyond them.
std::vector<double> lattice_masses(const DistributionSpec& d, double t0, double dt,
                                   std::size_t count, double quantile_cut);

}  // namespace netlearn
