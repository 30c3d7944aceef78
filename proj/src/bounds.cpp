#include "memclf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memclf/parallel.hpp"
#include "memclf/rng.hpp"

namespace memclf {

void BoundParams::validate() const {
    if (n < 1 || q < 1) throw std::invalid_argument("BoundParams: need n >= 1, q >= 1");
    if (!(delta > 0.0 && delta <= 1.0 / q))
        throw std::invalid_argument("BoundParams: need 0 < delta <= 1/q");
    if (!(rho > 0.0) || !(kappa > 0.0))
        throw std::invalid_argument("BoundParams: rho and kappa must be positive");
    if (static_cast<int>(rademacher_h.size()) != q)
        throw std::invalid_argument("BoundParams: rademacher_h must list q values");
    for (double r : rademacher_h)
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("BoundParams: rademacher_h entries must be in [0,1]");
    if (!(empirical_risk >= 0.0 && empirical_risk <= 1.0))
        throw std::invalid_argument("BoundParams: empirical_risk must be in [0,1]");
    if (n_k_plus) {
        if (static_cast<int>(n_k_plus->size()) != q)
            throw std::invalid_argument("BoundParams: n_k_plus must list q counts");
        for (int c : *n_k_plus)
            if (c < 0 || c > n)
                throw std::invalid_argument("BoundParams: n_k_plus entry outside [0,n]");
    }
}

double c_term(int n, int q, double delta, double rho) {
    if (n < 1 || q < 1) throw std::invalid_argument("c_term: need n >= 1, q >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("c_term: delta must be in (0,1)");
    if (!(rho > 0.0)) throw std::invalid_argument("c_term: rho must be positive");
    const double tail = std::sqrt(std::log(4.0 / delta) / n);
    if (q == 1) return tail;  // ln q = 0 kills the first term
    const double log_q = std::log(static_cast<double>(q));
    const double inner = rho * rho * n / log_q;
    if (inner <= 1.0)
        throw std::domain_error("c_term: log(rho^2*n/log(q)) requires rho^2*n > log(q)");
    return (1.0 / delta) * std::sqrt(log_q / n) * (2.0 + std::sqrt(std::log(inner))) + tail;
}

boost::multiprecision::cpp_int count_selector_hypotheses(int n, int q) {
    if (q < 1 || q > n)
        throw std::invalid_argument("count_selector_hypotheses: need 1 <= q <= n");
    boost::multiprecision::cpp_int binom = 1;
    for (int i = 1; i <= q - 1; ++i) {  // C(n-1, q-1) multiplicatively, exact at each step
        binom *= (n - 1) - (q - 1) + i;
        binom /= i;
    }
    return binom * n;
}

double selector_rademacher_bound(int n, int q) {
    if (n < 1 || q < 1)
        throw std::invalid_argument("selector_rademacher_bound: need n >= 1, q >= 1");
    return q * (1.0 + std::log(static_cast<double>(n))) / std::sqrt(static_cast<double>(n));
}

bool bound_is_vacuous(int n, int q) {
    return 4.0 * q * selector_rademacher_bound(n, q) >= 1.0;
}

BoundResult generalization_bound_rhs(const BoundParams& p) {
    p.validate();
    const double max_h = *std::max_element(p.rademacher_h.begin(), p.rademacher_h.end());
    const double selector = (p.q * (1.0 + std::log(static_cast<double>(p.n))) + p.kappa) /
                            std::sqrt(static_cast<double>(p.n));
    const double rhs =
        p.empirical_risk + 4.0 * p.q * (selector + max_h) + c_term(p.n, p.q, p.delta, p.rho);
    return {rhs, std::min(rhs, 1.0)};
}

BoundResult intermediate_bound_rhs(const BoundParams& p) {
    p.validate();
    if (!p.n_k_plus)
        throw std::invalid_argument("intermediate_bound_rhs: n_k_plus is required");
    const double selector = (p.q * (1.0 + std::log(static_cast<double>(p.n))) + p.kappa) /
                            std::sqrt(static_cast<double>(p.n));
    double sum = 0.0;
    for (int k = 0; k < p.q; ++k)
        sum += std::min(static_cast<double>((*p.n_k_plus)[k]) / p.n,
                        4.0 * (p.rademacher_h[k] + selector));
    const double rhs = p.empirical_risk + sum + c_term(p.n, p.q + 1, p.delta, p.rho);
    return {rhs, std::min(rhs, 1.0)};
}

double empirical_rademacher_finite(const std::vector<std::vector<double>>& predictions,
                                   int num_draws, std::uint64_t seed, int threads) {
    if (predictions.empty())
        throw std::invalid_argument("empirical_rademacher_finite: empty hypothesis set");
    const std::size_t n = predictions[0].size();
    if (n == 0)
        throw std::invalid_argument("empirical_rademacher_finite: zero sample points");
    for (const auto& row : predictions)
        if (row.size() != n)
            throw std::invalid_argument("empirical_rademacher_finite: ragged prediction matrix");
    if (num_draws < 1)
        throw std::invalid_argument("empirical_rademacher_finite: need num_draws >= 1");

    std::vector<double> sup(num_draws);
    parallel_for(num_draws, threads, [&](int d) {
        Rng rng(derive(seed, static_cast<std::uint64_t>(d)));
        std::vector<double> eps(n);
        for (std::size_t i = 0; i < n; ++i) eps[i] = (rng.next_u64() & 1) ? 1.0 : -1.0;
        double best = -1e300;
        for (const auto& row : predictions) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += eps[i] * row[i];
            best = std::max(best, dot);
        }
        sup[d] = best / static_cast<double>(n);
    });
    double total = 0.0;
    for (double s : sup) total += s;  // fixed index order: bit-stable for any thread count
    return total / num_draws;
}

}  // namespace memclf
