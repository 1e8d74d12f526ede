#pragma once

// Closed-form expected learning time for fully connected instances (every
// l-node fed by every i-node) with i.i.d. laws. Both forms expand the
// per-node epoch CDF H_l(t), a sum of |I|+2 terms, to the |L|-th power with
// the multinomial theorem and integrate term by term.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace netlearn {

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Visits every tuple of `parts` nonnegative integers summing to `total`.
template <class F>
void for_each_composition(std::size_t total, std::size_t parts, F&& visit) {
    std::vector<std::size_t> a(parts, 0);
    if (parts == 0) return;
    a[parts - 1] = total;
    while (true) {
        visit(std::span<const std::size_t>(a));
        // next composition in lexicographic order of the prefix
        std::size_t k = parts - 1;
        while (k > 0 && a[k] == 0) --k;
        if (k == 0) return;
        const std::size_t rest = a[k] - 1;
        a[k] = 0;
        ++a[k - 1];
        a[parts - 1] = rest;
    }
}

double multinomial(std::size_t total, std::span<const std::size_t> parts);

/// Exponential laws: i-node rate `rate_i`, l-node compute rate per epoch
/// rates_l[k-1]. Throws PoleError when some rates_l[k] == w * rate_i, 1 <= w <= |I|.
double closed_form_T_exponential(std::size_t n_l, std::size_t n_i, double rate_i,
                                 std::span<const double> rates_l);

/// Same sum, but an epoch whose rate lies within a small relative distance
/// of a pole is evaluated as the mean of two symmetric offsets.
double closed_form_T_exponential_regularized(std::size_t n_l, std::size_t n_i, double rate_i,
                                             std::span<const double> rates_l);

/// Coefficient table A^k(A, w) for w = 1..|I|+2 (index 0 unused).
std::vector<double> exponential_terms(std::size_t n_i, double rate_i, double rate_l);

/// Uniform laws: i-node U(a_i, b_i), l-node U(a_l, b_l) per epoch. Requires
/// a_l <= a_i <= b_i <= b_l for every epoch.
double closed_form_T_uniform(std::size_t n_l, std::size_t n_i, std::pair<double, double> gen,
                             std::span<const std::pair<double, double>> compute);

/// Power-basis coefficients of H_l on each of the three support pieces; entry
/// [p][w] multiplies t^w for w = 1..|I|+1 and entry [p][|I|+2] is the constant.
std::vector<std::vector<double>> uniform_piece_terms(std::size_t n_i, std::pair<double, double> gen,
                                                     std::pair<double, double> compute);

}  // namespace netlearn
