#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "netlearn/learning.hpp"

namespace netlearn {

namespace {

struct LinearFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double mse = std::numeric_limits<double>::infinity();
};

// Ordinary least squares of error on phi = ln(c3 + X) / sqrt(K gamma).
LinearFit fit_linear(std::span<const ProfileObservation> obs, double c3) {
    const double n = static_cast<double>(obs.size());
    std::vector<double> phi(obs.size());
    double mp = 0.0;
    double me = 0.0;
    for (std::size_t j = 0; j < obs.size(); ++j) {
        phi[j] = std::log(c3 + obs[j].X) / std::sqrt(obs[j].K * obs[j].gamma);
        mp += phi[j];
        me += obs[j].error;
    }
    mp /= n;
    me /= n;
    double spp = 0.0;
    double spe = 0.0;
    for (std::size_t j = 0; j < obs.size(); ++j) {
        spp += (phi[j] - mp) * (phi[j] - mp);
        spe += (phi[j] - mp) * (obs[j].error - me);
    }
    LinearFit f;
    if (!(spp > 0.0)) return f;
    f.c2 = spe / spp;
    f.c1 = me - f.c2 * mp;
    f.mse = profile_mse(obs, f.c1, f.c2, c3);
    return f;
}

}  // namespace

double profile_mse(std::span<const ProfileObservation> obs, double c1, double c2, double c3) {
    double s = 0.0;
    for (const auto& o : obs) {
        const double r = c1 + c2 * std::log(c3 + o.X) / std::sqrt(o.K * o.gamma) - o.error;
        s += r * r;
    }
    return s / static_cast<double>(obs.size());
}

ProfileFit fit_profile(std::span<const ProfileObservation> obs) {
    if (obs.size() < 4)
        throw FitError("profile fit needs at least 4 observations, got " + std::to_string(obs.size()));
    std::set<double> xs;
    double x_max = 0.0;
    for (std::size_t j = 0; j < obs.size(); ++j) {
        const auto& o = obs[j];
        if (!(o.X > 0.0 && o.K > 0.0 && o.gamma > 0.0 && std::isfinite(o.X) && std::isfinite(o.K) &&
              std::isfinite(o.gamma)))
            throw FitError("observation " + std::to_string(j + 1) + ": X, K and gamma must be positive");
        if (!(o.error > 0.0 && o.error <= 1.0))
            throw FitError("observation " + std::to_string(j + 1) + ": error must lie in (0, 1]");
        xs.insert(o.X);
        x_max = std::max(x_max, o.X);
    }
    if (xs.size() < 2) throw FitError("profile fit needs at least 2 distinct X values");

    // Coarse log scan, then golden section around the best bracket.
    const double c3_hi = 1e4 * (x_max + 1.0);
    std::vector<double> grid{0.0};
    const int steps = 600;
    for (int j = 0; j <= steps; ++j)
        grid.push_back(1e-3 * std::pow(c3_hi / 1e-3, static_cast<double>(j) / steps));
    std::size_t best = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double m = fit_linear(obs, grid[j]).mse;
        if (m < best_mse) {
            best_mse = m;
            best = j;
        }
    }
    if (!std::isfinite(best_mse)) throw FitError("observations are degenerate: model is underdetermined");

    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, grid.size() - 1)];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = fit_linear(obs, x1).mse;
    double f2 = fit_linear(obs, x2).mse;
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, b); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = fit_linear(obs, x1).mse;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = fit_linear(obs, x2).mse;
        }
    }
    double c3 = 0.5 * (a + b);
    LinearFit lf = fit_linear(obs, c3);
    if (best_mse < lf.mse) {
        c3 = grid[best];
        lf = fit_linear(obs, c3);
    }
    return {lf.c1, lf.c2, c3, lf.mse};
}

}  // namespace netlearn
