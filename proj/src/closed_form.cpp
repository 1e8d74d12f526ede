#include "netlearn/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace netlearn {

namespace {

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
    return r;
}

double ipow(double x, std::size_t n) {
    double r = 1.0;
    for (std::size_t j = 0; j < n; ++j) r *= x;
    return r;
}

double sign(std::size_t z) { return z % 2 == 1 ? 1.0 : -1.0; }  // (-1)^(z+1)

}  // namespace

double multinomial(std::size_t total, std::span<const std::size_t> parts) {
    double r = 1.0;
    std::size_t used = 0;
    for (auto a : parts) {
        used += a;
        r *= binomial(used, a);
    }
    return used == total ? r : 0.0;
}

namespace {

using Real = long double;

Real ipow_l(Real x, std::size_t n) {
    Real r = 1.0L;
    for (std::size_t j = 0; j < n; ++j) r *= x;
    return r;
}

std::vector<Real> exponential_terms_l(std::size_t n_i, Real rate_i, Real rate_l) {
    std::vector<Real> A(n_i + 3, 0.0L);
    for (std::size_t w = 1; w <= n_i; ++w) {
        const Real gap = static_cast<Real>(w) * rate_i - rate_l;
        if (std::abs(gap) <= 1e-12L * std::max(rate_l, static_cast<Real>(w) * rate_i))
            throw PoleError("compute rate " + std::to_string(static_cast<double>(rate_l)) + " equals " +
                            std::to_string(w) + " x generation rate");
        A[w] = static_cast<Real>(binomial(n_i, w)) * sign(w) * rate_l / gap;
    }
    Real constant = 0.0L;
    Real tail = 0.0L;
    for (std::size_t z = 1; z <= n_i; ++z) {
        const Real c = static_cast<Real>(binomial(n_i, z)) * sign(z);
        constant += c;
        tail += c * static_cast<Real>(z) * rate_i / (rate_l - static_cast<Real>(z) * rate_i);
    }
    A[n_i + 1] = constant;
    A[n_i + 2] = tail;
    return A;
}

// Expected duration of one epoch.
Real exponential_epoch(std::size_t n_l, std::size_t n_i, Real rate_i, Real rate_l) {
    const auto A = exponential_terms_l(n_i, rate_i, rate_l);
    Real epoch = 0.0L;
    for_each_composition(n_l, n_i + 2, [&](std::span<const std::size_t> a) {
        // a[w-1] is the exponent of A^k(A, w)
        if (a[n_i] == n_l) return;  // the constant term of H^|L|
        Real term = static_cast<Real>(multinomial(n_l, a));
        Real decay = rate_l * static_cast<Real>(a[n_i + 1]);
        for (std::size_t w = 1; w <= n_i + 2; ++w) term *= ipow_l(A[w], a[w - 1]);
        for (std::size_t w = 1; w <= n_i; ++w) decay += rate_i * static_cast<Real>(w * a[w - 1]);
        epoch += term / decay;
    });
    return -epoch;
}

void check_rates(std::size_t n_l, std::size_t n_i, double rate_i) {
    if (n_l < 1 || n_i < 1) throw std::invalid_argument("closed form needs |L| >= 1 and |I| >= 1");
    if (!(rate_i > 0.0)) throw std::invalid_argument("generation rate must be positive");
}

}  // namespace

std::vector<double> exponential_terms(std::size_t n_i, double rate_i, double rate_l) {
    const auto A = exponential_terms_l(n_i, rate_i, rate_l);
    return std::vector<double>(A.begin(), A.end());
}

double closed_form_T_exponential(std::size_t n_l, std::size_t n_i, double rate_i, std::span<const double> rates_l) {
    check_rates(n_l, n_i, rate_i);
    Real total = 0.0L;
    for (double rate_l : rates_l) {
        if (!(rate_l > 0.0)) throw std::invalid_argument("compute rate must be positive");
        total += exponential_epoch(n_l, n_i, rate_i, rate_l);
    }
    return static_cast<double>(total);
}

double closed_form_T_exponential_regularized(std::size_t n_l, std::size_t n_i, double rate_i,
                                             std::span<const double> rates_l) {
    check_rates(n_l, n_i, rate_i);
    // A pole at distance g costs about eps / g^|L| in cancellation; the
    // symmetric average errs by O(delta^2). Balance the two.
    const Real delta = std::pow(std::numeric_limits<Real>::epsilon(), 1.0L / static_cast<Real>(n_l + 2));
    Real total = 0.0L;
    for (double rate_l : rates_l) {
        if (!(rate_l > 0.0)) throw std::invalid_argument("compute rate must be positive");
        Real nearest = std::numeric_limits<Real>::infinity();
        for (std::size_t w = 1; w <= n_i; ++w)
            nearest = std::min(nearest, std::abs(static_cast<Real>(w) * rate_i - rate_l) / rate_l);
        if (nearest >= delta) {
            total += exponential_epoch(n_l, n_i, rate_i, rate_l);
        } else {
            const Real r = rate_l;
            total += 0.5L * (exponential_epoch(n_l, n_i, rate_i, r * (1.0L + delta)) +
                             exponential_epoch(n_l, n_i, rate_i, r * (1.0L - delta)));
        }
    }
    return static_cast<double>(total);
}

std::vector<std::vector<double>> uniform_piece_terms(std::size_t n_i, std::pair<double, double> gen,
                                                     std::pair<double, double> compute) {
    const auto [ai, bi] = gen;
    const auto [al, bl] = compute;
    const std::size_t m = n_i;
    const double di = bi - ai;
    const double dl = bl - al;
    const double D = static_cast<double>(m + 1) * ipow(di, m) * dl;
    std::vector<std::vector<double>> P(3, std::vector<double>(m + 3, 0.0));
    auto add_shifted_power = [&](std::vector<double>& p, double shift, double scale) {
        // scale * (t - shift)^(m+1)
        for (std::size_t w = 0; w <= m + 1; ++w) {
            const double c = scale * binomial(m + 1, w) * ipow(-shift, m + 1 - w);
            if (w == 0) p[m + 2] += c;
            else p[w] += c;
        }
    };
    // rising piece: only the spread of the slowest delivery matters
    add_shifted_power(P[0], al + ai, 1.0 / D);
    // flat piece: every delivery outcome fits inside the compute window
    P[1][1] = 1.0 / dl;
    P[1][m + 2] = (-bi - al) / dl + di / (static_cast<double>(m + 1) * dl);
    // falling piece
    P[2][1] = 1.0 / dl;
    P[2][m + 2] = (-bi - al) / dl + ipow(di, m + 1) / D;
    add_shifted_power(P[2], bl + ai, -1.0 / D);
    return P;
}

double closed_form_T_uniform(std::size_t n_l, std::size_t n_i, std::pair<double, double> gen,
                             std::span<const std::pair<double, double>> compute) {
    if (n_l < 1 || n_i < 1) throw std::invalid_argument("closed form needs |L| >= 1 and |I| >= 1");
    const auto [ai, bi] = gen;
    if (!(ai < bi)) throw std::invalid_argument("generation law needs a < b");
    double total = 0.0;
    for (const auto& [al, bl] : compute) {
        if (!(al <= ai && ai <= bi && bi <= bl) || !(al < bl))
            throw std::domain_error("uniform closed form requires a_L <= a_I <= b_I <= b_L");
        const auto P = uniform_piece_terms(n_i, gen, {al, bl});
        const double edges[4] = {al + ai, al + bi, bl + ai, bl + bi};
        double epoch = 0.0;
        for (std::size_t p = 0; p < 3; ++p) {
            const double lo = edges[p];
            const double hi = edges[p + 1];
            if (hi <= lo) continue;
            for_each_composition(n_l, n_i + 2, [&](std::span<const std::size_t> a) {
                std::size_t n = 0;
                for (std::size_t w = 1; w <= n_i + 1; ++w) n += w * a[w - 1];
                if (n == 0) return;  // constant term has no density
                double term = multinomial(n_l, a);
                for (std::size_t w = 1; w <= n_i + 2; ++w) term *= ipow(P[p][w], a[w - 1]);
                const double nn = static_cast<double>(n);
                epoch += term * nn / (nn + 1.0) * (ipow(hi, n + 1) - ipow(lo, n + 1));
            });
        }
        total += epoch;
    }
    return total;
}

}  // namespace netlearn
