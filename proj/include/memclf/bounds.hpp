#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace memclf {

// Inputs to the generalization-bound right-hand sides. The theorem regime
// requires 0 < delta <= 1/q; validate() enforces it (c_term itself only
// needs delta in (0,1)).
struct BoundParams {
    int n = 1;
    int q = 1;
    double delta = 0.05;
    double rho = 1.0;
    double kappa = 1.0;
    std::vector<double> rademacher_h;  // q estimates, each in [0,1]
    double empirical_risk = 0.0;
    std::optional<std::vector<int>> n_k_plus;  // per-memory correct counts

    void validate() const;
};

// Confidence term: (1/delta) sqrt(ln q / n) (2 + sqrt(ln(rho^2 n / ln q)))
//                  + sqrt(ln(4/delta) / n),
// natural logs throughout; q = 1 is the limit sqrt(ln(4/delta)/n). Throws
// std::domain_error when rho^2 n / ln q <= 1 (inner log would be <= 0).
double c_term(int n, int q, double delta, double rho);

// Exact selector hypothesis count N_{n,q} = n * C(n-1, q-1).
boost::multiprecision::cpp_int count_selector_hypotheses(int n, int q);

// Massart-style selector complexity bound q (1 + ln n) / sqrt(n).
double selector_rademacher_bound(int n, int q);

// True when 4q * q(1+ln n)/sqrt(n) >= 1: the selector term alone makes the
// risk bound meaningless.
bool bound_is_vacuous(int n, int q);

struct BoundResult {
    double rhs = 0.0;          // raw right-hand side
    double rhs_clamped = 0.0;  // min(rhs, 1), report-only companion
};

// R_hat + 4q[(q(1+ln n) + kappa)/sqrt(n) + max_k rademacher_h[k]]
//       + c_term(n, q, delta, rho).
BoundResult generalization_bound_rhs(const BoundParams& p);

// Per-cluster intermediate form: R_hat
//   + sum_k min(n_k_plus[k]/n, 4[rademacher_h[k] + (q(1+ln n) + kappa)/sqrt(n)])
//   + c_term(n, q+1, delta, rho). Requires n_k_plus.
BoundResult intermediate_bound_rhs(const BoundParams& p);

// Monte-Carlo empirical Rademacher complexity of a finite hypothesis class
// given its prediction matrix (|H| rows over n points, values in [-1,1]):
// mean over draws of sup_h (1/n) sum_i eps_i h(x_i). Per-draw derived
// seeds make the estimate independent of evaluation order.
double empirical_rademacher_finite(const std::vector<std::vector<double>>& predictions,
                                   int num_draws, std::uint64_t seed, int threads = 1);

}  // namespace memclf
