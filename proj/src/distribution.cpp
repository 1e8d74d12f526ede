#include "netlearn/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "netlearn/kernels.hpp"

namespace netlearn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double trapezoid_weight(std::size_t j, std::size_t n) {
    if (n == 1) return 1.0;
    return (j == 0 || j + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

DistributionSpec::DistributionSpec(Uniform u) : law_(u) {
    if (!(u.a >= 0.0) || !(u.b > u.a) || !std::isfinite(u.b))
        throw std::invalid_argument("uniform law needs 0 <= a < b, got a=" + std::to_string(u.a) +
                                    " b=" + std::to_string(u.b));
}

DistributionSpec::DistributionSpec(Exponential e) : law_(e) {
    if (!(e.rate > 0.0) || !std::isfinite(e.rate))
        throw std::invalid_argument("exponential law needs rate > 0, got " + std::to_string(e.rate));
}

DistributionSpec::DistributionSpec(PointMass p) : law_(p) {
    if (!(p.at >= 0.0) || !std::isfinite(p.at))
        throw std::invalid_argument("point mass must sit at a finite t >= 0");
}

DistributionSpec::DistributionSpec(GriddedDensity g) : law_(g) {
    if (!(g.dt > 0.0)) throw std::invalid_argument("gridded density needs dt > 0");
    if (!(g.t0 >= 0.0)) throw std::invalid_argument("gridded density needs t0 >= 0");
    if (g.density.size() < 2) throw std::invalid_argument("gridded density needs at least 2 samples");
    for (double v : g.density)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("gridded density values must be finite and nonnegative");
    gridded_cdf_.resize(g.density.size());
    gridded_cdf_[0] = 0.0;
    for (std::size_t j = 1; j < g.density.size(); ++j)
        gridded_cdf_[j] = gridded_cdf_[j - 1] + 0.5 * g.dt * (g.density[j - 1] + g.density[j]);
    const double total = gridded_cdf_.back();
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("gridded density integrates to " + std::to_string(total) +
                                    ", expected 1 within 1e-6");
}

double DistributionSpec::cdf(double t) const {
    return std::visit(
        overloaded{
            [&](const Uniform& u) { return std::clamp((t - u.a) / (u.b - u.a), 0.0, 1.0); },
            [&](const Exponential& e) { return t <= 0.0 ? 0.0 : -std::expm1(-e.rate * t); },
            [&](const PointMass& p) { return t >= p.at ? 1.0 : 0.0; },
            [&](const GriddedDensity& g) {
                if (t <= g.t0) return 0.0;
                const double total = gridded_cdf_.back();
                const double x = (t - g.t0) / g.dt;
                const auto n = g.density.size();
                if (x >= static_cast<double>(n - 1)) return 1.0;
                const auto j = static_cast<std::size_t>(x);
                const double h = (x - static_cast<double>(j)) * g.dt;
                const double r0 = g.density[j];
                const double slope = (g.density[j + 1] - r0) / g.dt;
                return std::min(1.0, (gridded_cdf_[j] + r0 * h + 0.5 * slope * h * h) / total);
            },
        },
        law_);
}

double DistributionSpec::quantile(double p) const {
    p = std::clamp(p, 0.0, 1.0);
    return std::visit(
        overloaded{
            [&](const Uniform& u) { return u.a + (u.b - u.a) * p; },
            [&](const Exponential& e) {
                return p >= 1.0 ? std::numeric_limits<double>::infinity() : -std::log1p(-p) / e.rate;
            },
            [&](const PointMass& pm) { return pm.at; },
            [&](const GriddedDensity& g) {
                const double target = p * gridded_cdf_.back();
                auto it = std::upper_bound(gridded_cdf_.begin(), gridded_cdf_.end(), target);
                if (it == gridded_cdf_.begin()) return g.t0;
                if (it == gridded_cdf_.end()) return g.t0 + g.dt * static_cast<double>(g.density.size() - 1);
                const auto j = static_cast<std::size_t>(it - gridded_cdf_.begin()) - 1;
                const double need = target - gridded_cdf_[j];
                const double r0 = g.density[j];
                const double half_slope = 0.5 * (g.density[j + 1] - r0) / g.dt;
                // solve half_slope*h^2 + r0*h - need = 0 in the stable form
                const double disc = std::max(0.0, r0 * r0 + 4.0 * half_slope * need);
                const double denom = r0 + std::sqrt(disc);
                const double h = denom > 0.0 ? 2.0 * need / denom : 0.0;
                return g.t0 + g.dt * static_cast<double>(j) + std::clamp(h, 0.0, g.dt);
            },
        },
        law_);
}

double DistributionSpec::mean() const {
    return std::visit(
        overloaded{
            [](const Uniform& u) { return 0.5 * (u.a + u.b); },
            [](const Exponential& e) { return 1.0 / e.rate; },
            [](const PointMass& p) { return p.at; },
            [&](const GriddedDensity& g) {
                double m = 0.0;
                for (std::size_t j = 0; j + 1 < g.density.size(); ++j) {
                    const double tj = g.t0 + g.dt * static_cast<double>(j);
                    const double r0 = g.density[j];
                    const double d = g.density[j + 1] - r0;
                    m += tj * (r0 * g.dt + 0.5 * d * g.dt) + 0.5 * r0 * g.dt * g.dt + d * g.dt * g.dt / 3.0;
                }
                return m / gridded_cdf_.back();
            },
        },
        law_);
}

double DistributionSpec::sample(double u) const { return quantile(u); }

double DistributionSpec::support_lo() const {
    return std::visit(overloaded{
                          [](const Uniform& u) { return u.a; },
                          [](const Exponential&) { return 0.0; },
                          [](const PointMass& p) { return p.at; },
                          [](const GriddedDensity& g) { return g.t0; },
                      },
                      law_);
}

double DistributionSpec::support_hi(double quantile_cut) const {
    return std::visit(overloaded{
                          [](const Uniform& u) { return u.b; },
                          [&](const Exponential& e) { return -std::log1p(-quantile_cut) / e.rate; },
                          [](const PointMass& p) { return p.at; },
                          [](const GriddedDensity& g) {
                              return g.t0 + g.dt * static_cast<double>(g.density.size() - 1);
                          },
                      },
                      law_);
}

bool DistributionSpec::is_zero() const {
    const auto* p = std::get_if<PointMass>(&law_);
    return p != nullptr && p->at == 0.0;
}

bool DistributionSpec::operator==(const DistributionSpec& other) const {
    return std::visit(
        overloaded{
            [](const Uniform& x, const Uniform& y) { return x.a == y.a && x.b == y.b; },
            [](const Exponential& x, const Exponential& y) { return x.rate == y.rate; },
            [](const PointMass& x, const PointMass& y) { return x.at == y.at; },
            [](const GriddedDensity& x, const GriddedDensity& y) {
                return x.t0 == y.t0 && x.dt == y.dt && x.density == y.density;
            },
            [](const auto&, const auto&) { return false; },
        },
        law_, other.law_);
}

DistributionSpec scaled(const DistributionSpec& d, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    if (factor == 1.0) return d;
    return std::visit(overloaded{
                          [&](const Uniform& u) { return DistributionSpec(Uniform{u.a * factor, u.b * factor}); },
                          [&](const Exponential& e) { return DistributionSpec(Exponential{e.rate / factor}); },
                          [&](const PointMass& p) { return DistributionSpec(PointMass{p.at * factor}); },
                          [&](const GriddedDensity& g) {
                              GriddedDensity s{g.t0 * factor, g.dt * factor, g.density};
                              for (double& v : s.density) v /= factor;
                              return DistributionSpec(std::move(s));
                          },
                      },
                      d.law());
}

double GridFunction::integral() const {
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) s += trapezoid_weight(j, values.size()) * values[j];
    return s * dt;
}

std::vector<double> GridFunction::masses() const {
    std::vector<double> m(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) m[j] = trapezoid_weight(j, values.size()) * values[j] * dt;
    return m;
}

GridFunction GridFunction::from_masses(double t0, double dt, std::span<const double> masses) {
    GridFunction g{t0, dt, std::vector<double>(masses.size())};
    for (std::size_t j = 0; j < masses.size(); ++j)
        g.values[j] = masses[j] / (trapezoid_weight(j, masses.size()) * dt);
    return g;
}

double GridFunction::cdf(double t) const {
    if (values.empty()) return 0.0;
    const auto m = masses();
    if (m.size() == 1) return t >= t0 ? m[0] : 0.0;
    const double x = (t - t0) / dt + 0.5;  // cell coordinate
    if (x <= 0.0) return 0.0;
    const double n = static_cast<double>(m.size());
    if (x >= n) return kernels::pairwise_sum(m);
    const auto j = static_cast<std::size_t>(x);
    double below = 0.0;
    for (std::size_t k = 0; k < j; ++k) below += m[k];
    return below + m[j] * (x - static_cast<double>(j));
}

std::vector<double> lattice_masses(const DistributionSpec& d, double t0, double dt, std::size_t count,
                                   double quantile_cut) {
    std::vector<double> m(count, 0.0);
    if (count == 0) return m;
    const bool exponential = std::holds_alternative<Exponential>(d.law());
    const double norm = exponential ? d.cdf(d.support_hi(quantile_cut)) : 1.0;
    auto F = [&](double t) { return std::min(1.0, d.cdf(t) / norm); };
    double prev = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double up = j + 1 == count ? 1.0 : F(t0 + (static_cast<double>(j) + 0.5) * dt);
        m[j] = std::max(0.0, up - prev);
        prev = std::max(prev, up);
    }
    return m;
}

GridFunction to_grid(const DistributionSpec& d, std::size_t resolution, double quantile_cut) {
    if (resolution < 64) throw std::invalid_argument("grid resolution must be at least 64 points");
    if (const auto* p = std::get_if<PointMass>(&d.law())) return GridFunction{p->at, 1.0, {1.0}};
    const double lo = d.support_lo();
    const double hi = d.support_hi(quantile_cut);
    const double dt = (hi - lo) / static_cast<double>(resolution - 1);
    const auto m = lattice_masses(d, lo, dt, resolution, quantile_cut);
    return GridFunction::from_masses(lo, dt, m);
}

GridFunction max_of_independent(std::span<const DistributionSpec> dists, std::size_t resolution,
                                double quantile_cut) {
    if (dists.empty()) throw std::invalid_argument("max_of_independent needs at least one law");
    if (dists.size() == 1) return to_grid(dists[0], resolution, quantile_cut);
    if (resolution < 64) throw std::invalid_argument("grid resolution must be at least 64 points");
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& d : dists) {
        lo = std::max(lo, d.support_lo());
        hi = std::max(hi, d.support_hi(quantile_cut));
    }
    if (hi - lo <= 0.0) return GridFunction{hi, 1.0, {1.0}};
    const double dt = (hi - lo) / static_cast<double>(resolution - 1);
    std::vector<double> prod(resolution, 1.0);
    for (const auto& d : dists) {
        const auto f = kernels::cumulative(lattice_masses(d, lo, dt, resolution, quantile_cut));
        kernels::multiply_into(prod, f);
    }
    prod.back() = 1.0;
    const auto m = kernels::differences(prod);
    return GridFunction::from_masses(lo, dt, m);
}

namespace {

std::vector<double> resample_masses(const GridFunction& g, double dt, std::size_t& count) {
    const double span = g.dt * static_cast<double>(g.size() - 1);
    count = static_cast<std::size_t>(std::ceil(span / dt - 1e-9)) + 1;
    const auto src = g.masses();
    const auto cum = kernels::cumulative(src);
    // cell-uniform CDF of the source lattice evaluated at target cell edges
    auto C = [&](double t) {
        const double x = (t - g.t0) / g.dt + 0.5;
        if (x <= 0.0) return 0.0;
        if (x >= static_cast<double>(src.size())) return cum.back();
        const auto j = static_cast<std::size_t>(x);
        return (j == 0 ? 0.0 : cum[j - 1]) + src[j] * (x - static_cast<double>(j));
    };
    std::vector<double> m(count);
    double prev = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double up = j + 1 == count ? cum.back() : C(g.t0 + (static_cast<double>(j) + 0.5) * dt);
        m[j] = std::max(0.0, up - prev);
        prev = std::max(prev, up);
    }
    return m;
}

}  // namespace

GridFunction convolve(const GridFunction& p1, const GridFunction& p2) {
    if (p1.values.empty() || p2.values.empty()) throw std::invalid_argument("convolve needs non-empty grids");
    if (p1.size() == 1 || p2.size() == 1) {
        const GridFunction& point = p1.size() == 1 ? p1 : p2;
        const GridFunction& other = p1.size() == 1 ? p2 : p1;
        const double w = point.values[0] * point.dt;
        GridFunction out = other;
        out.t0 += point.t0;
        for (double& v : out.values) v *= w;
        return out;
    }
    std::vector<double> m1;
    std::vector<double> m2;
    double dt = p1.dt;
    if (std::abs(p1.dt - p2.dt) <= 1e-12 * std::max(p1.dt, p2.dt)) {
        m1 = p1.masses();
        m2 = p2.masses();
    } else {
        dt = std::max(p1.dt, p2.dt);
        std::size_t n = 0;
        m1 = p1.dt == dt ? p1.masses() : resample_masses(p1, dt, n);
        m2 = p2.dt == dt ? p2.masses() : resample_masses(p2, dt, n);
    }
    const auto out = kernels::convolve(m1, m2);
    return GridFunction::from_masses(p1.t0 + p2.t0, dt, out);
}

double expectation(const GridFunction& p) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += trapezoid_weight(j, p.size()) * p.values[j] * p.t(j);
    return s * p.dt;
}

}  // namespace netlearn
