#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "memclf/bounds.hpp"
#include "memclf/rng.hpp"

using namespace memclf;

namespace {

nlohmann::json load_oracle() {
    std::string dir = MEMCLF_TEST_DATA_DIR;
    if (const char* env = std::getenv("MEMCLF_TEST_DATA_DIR")) dir = env;
    std::ifstream in(dir + "/bound_oracle.json");
    REQUIRE_MESSAGE(in.good(), "bound_oracle.json missing");
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("formulas match the frozen high-precision oracle") {
    nlohmann::json oracle = load_oracle();
    int checked = 0;
    for (const auto& c : oracle["cases"]) {
        const std::string kind = c["kind"];
        if (kind == "c_term") {
            double got = c_term(c["n"], c["q"], c["delta"], c["rho"]);
            double want = std::stod(c["value"].get<std::string>());
            CHECK(got == doctest::Approx(want).epsilon(1e-10));
            ++checked;
        } else if (kind == "selector_rademacher") {
            double got = selector_rademacher_bound(c["n"], c["q"]);
            double want = std::stod(c["value"].get<std::string>());
            CHECK(got == doctest::Approx(want).epsilon(1e-10));
            ++checked;
        } else if (kind == "count") {
            auto got = count_selector_hypotheses(c["n"], c["q"]);
            CHECK(got.str() == c["value"].get<std::string>());
            ++checked;
        } else if (kind == "bound_rhs" || kind == "intermediate_rhs") {
            BoundParams p;
            p.n = c["n"];
            p.q = c["q"];
            p.delta = c["delta"];
            p.rho = c["rho"];
            p.kappa = c["kappa"];
            p.rademacher_h = c["rademacher_h"].get<std::vector<double>>();
            p.empirical_risk = c["empirical_risk"];
            double want = std::stod(c["value"].get<std::string>());
            double got;
            if (kind == "intermediate_rhs") {
                p.n_k_plus = c["n_k_plus"].get<std::vector<int>>();
                got = intermediate_bound_rhs(p).rhs;
            } else {
                got = generalization_bound_rhs(p).rhs;
            }
            CHECK(got == doctest::Approx(want).epsilon(1e-10));
            ++checked;
        }
    }
    CHECK(checked == static_cast<int>(oracle["cases"].size()));
    CHECK(checked >= 70);
}

TEST_CASE("q = 1 reduces the confidence term to the tail") {
    for (int n : {10, 1000, 1000000}) {
        for (double delta : {0.01, 0.25, 0.5}) {
            CAPTURE(n);
            CAPTURE(delta);
            CHECK(c_term(n, 1, delta, 1.0) ==
                  doctest::Approx(std::sqrt(std::log(4.0 / delta) / n)));
        }
    }
}

TEST_CASE("confidence term input and domain errors") {
    CHECK_THROWS_AS(c_term(0, 1, 0.05, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(c_term(100, 0, 0.05, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(c_term(100, 2, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(c_term(100, 2, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(c_term(100, 2, 0.05, 0.0), std::invalid_argument);
    // rho^2 n <= ln q pushes the inner log out of domain: n=1, q=3, rho small.
    CHECK_THROWS_AS(c_term(1, 3, 0.05, 0.5), std::domain_error);
    CHECK_NOTHROW(c_term(1, 3, 0.05, 2.0));
}

TEST_CASE("hypothesis count: exact small values and growth") {
    namespace mp = boost::multiprecision;
    CHECK(count_selector_hypotheses(5, 3) == 30);    // 5 * C(4,2)
    CHECK(count_selector_hypotheses(10, 1) == 10);   // n singletons
    CHECK(count_selector_hypotheses(10, 10) == 10);  // 10 * C(9,9)
    CHECK(count_selector_hypotheses(4, 2) == 12);    // 4 * 3
    // n * C(n-1, q-1) == C(n, q) * q, cross-checked multiplicatively.
    for (int n : {7, 19, 33}) {
        for (int q = 1; q <= n; ++q) {
            mp::cpp_int binom = 1;
            for (int i = 1; i <= q; ++i) {
                binom *= n - q + i;
                binom /= i;
            }
            CHECK(count_selector_hypotheses(n, q) == binom * q);
        }
    }
    CHECK_THROWS_AS(count_selector_hypotheses(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(count_selector_hypotheses(5, 6), std::invalid_argument);
    // Far beyond 64-bit: 3000 * C(2999, 2) digits check via the oracle file
    // above; here only positivity and exactness of a modular property.
    mp::cpp_int big = count_selector_hypotheses(3000, 3);
    CHECK(big == mp::cpp_int(3000) * (mp::cpp_int(2999) * 2998 / 2));
}

TEST_CASE("vacuity flag follows the selector term") {
    // Small n: selector term alone exceeds 1/4q.
    CHECK(bound_is_vacuous(100, 5));
    CHECK(bound_is_vacuous(10000, 5));
    CHECK(bound_is_vacuous(1000, 2));
    // Large n with small q clears it.
    CHECK_FALSE(bound_is_vacuous(1000000, 2));
    CHECK_FALSE(bound_is_vacuous(100000000, 5));
    // Boundary sanity: flag flips as n grows for fixed q.
    bool was_vacuous = true;
    for (long n = 100; n <= 100000000; n *= 10) {
        bool v = bound_is_vacuous(static_cast<int>(n), 2);
        if (!v) was_vacuous = false;
        if (!was_vacuous) CHECK_FALSE(v);  // monotone in n
    }
    CHECK_FALSE(was_vacuous);
}

TEST_CASE("bound params validation") {
    BoundParams p;
    p.n = 1000;
    p.q = 2;
    p.delta = 0.25;
    p.rademacher_h = {0.1, 0.2};
    CHECK_NOTHROW(p.validate());

    BoundParams bad = p;
    bad.delta = 0.6;  // > 1/q
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.rademacher_h = {0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.rademacher_h = {0.1, 1.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.empirical_risk = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.n_k_plus = std::vector<int>{5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.n_k_plus = std::vector<int>{5, 2000};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bound rhs composes its three pieces and clamps") {
    BoundParams p;
    p.n = 1000000;
    p.q = 2;
    p.delta = 0.25;
    p.kappa = 1.0;
    p.rademacher_h = {0.01, 0.03};
    p.empirical_risk = 0.05;
    BoundResult r = generalization_bound_rhs(p);
    double selector = (2.0 * (1.0 + std::log(1e6)) + 1.0) / 1000.0;
    double expect = 0.05 + 8.0 * (selector + 0.03) + c_term(1000000, 2, 0.25, 1.0);
    CHECK(r.rhs == doctest::Approx(expect));
    CHECK(r.rhs_clamped == doctest::Approx(std::min(expect, 1.0)));

    // Monotone in the worst per-cluster complexity.
    BoundParams worse = p;
    worse.rademacher_h = {0.01, 0.2};
    CHECK(generalization_bound_rhs(worse).rhs > r.rhs);

    // A hopeless configuration clamps to exactly 1.
    BoundParams hopeless = p;
    hopeless.n = 100;
    hopeless.empirical_risk = 0.9;
    CHECK(generalization_bound_rhs(hopeless).rhs > 1.0);
    CHECK(generalization_bound_rhs(hopeless).rhs_clamped == doctest::Approx(1.0));
}

TEST_CASE("intermediate form needs counts and uses q+1 confidence") {
    BoundParams p;
    p.n = 1000000;
    p.q = 2;
    p.delta = 0.25;
    p.rademacher_h = {0.01, 0.03};
    p.empirical_risk = 0.05;
    CHECK_THROWS_AS(intermediate_bound_rhs(p), std::invalid_argument);

    p.n_k_plus = std::vector<int>{400000, 300000};
    BoundResult r = intermediate_bound_rhs(p);
    double selector = (2.0 * (1.0 + std::log(1e6)) + 1.0) / 1000.0;
    double sum = std::min(0.4, 4.0 * (0.01 + selector)) +
                 std::min(0.3, 4.0 * (0.03 + selector));
    double expect = 0.05 + sum + c_term(1000000, 3, 0.25, 1.0);
    CHECK(r.rhs == doctest::Approx(expect));

    // When every cluster is tiny, the n_k/n branch wins the min.
    BoundParams tiny = p;
    tiny.n_k_plus = std::vector<int>{10, 10};
    double tiny_expect = 0.05 + 2e-5 + c_term(1000000, 3, 0.25, 1.0);
    CHECK(intermediate_bound_rhs(tiny).rhs == doctest::Approx(tiny_expect));
}

TEST_CASE("intermediate dominates the final form in the large-n regime") {
    // Termwise: min(a,b) <= b and the final form upgrades every per-cluster
    // complexity to the max and multiplies by q. Checked at n = 10^4..10^7.
    Rng rng(8);
    for (long n : {10000L, 100000L, 1000000L, 10000000L}) {
        for (int q : {2, 3, 5}) {
            CAPTURE(n);
            CAPTURE(q);
            BoundParams p;
            p.n = static_cast<int>(n);
            p.q = q;
            p.delta = 0.2 / q;
            p.empirical_risk = 0.1;
            for (int k = 0; k < q; ++k)
                p.rademacher_h.push_back(0.005 + 0.01 * rng.next_double());
            std::vector<int> counts;
            for (int k = 0; k < q; ++k)
                counts.push_back(static_cast<int>(rng.next_below(n / q)));
            p.n_k_plus = counts;
            CHECK(intermediate_bound_rhs(p).rhs <=
                  generalization_bound_rhs(p).rhs + 1e-12);
        }
    }
}

TEST_CASE("monte-carlo rademacher: known classes") {
    // Single constant hypothesis: E sup = E mean(eps) = 0.
    std::vector<std::vector<double>> one{std::vector<double>(64, 1.0)};
    double r1 = empirical_rademacher_finite(one, 4000, 7);
    CHECK(std::abs(r1) < 0.02);

    // {h, -h}: sup is |mean(eps)|, E ~ sqrt(2/(pi n)).
    std::vector<std::vector<double>> pair{std::vector<double>(64, 1.0),
                                          std::vector<double>(64, -1.0)};
    double r2 = empirical_rademacher_finite(pair, 4000, 7);
    double expect = std::sqrt(2.0 / (3.14159265358979 * 64.0));
    CHECK(r2 == doctest::Approx(expect).epsilon(0.08));

    // Full shattering (all 2^n sign patterns on n=10 points): sup = 1 always.
    int n = 10;
    std::vector<std::vector<double>> all;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<double> row(n);
        for (int i = 0; i < n; ++i) row[i] = (mask >> i) & 1 ? 1.0 : -1.0;
        all.push_back(row);
    }
    CHECK(empirical_rademacher_finite(all, 200, 3) == doctest::Approx(1.0));
}

TEST_CASE("monte-carlo rademacher respects the finite-class bound") {
    // Massart: R_hat <= max||a||_2 sqrt(2 ln |H|) / n for any finite class.
    Rng rng(15);
    int n = 128, H = 40;
    std::vector<std::vector<double>> preds(H, std::vector<double>(n));
    for (auto& row : preds)
        for (double& v : row) v = rng.next_u64() & 1 ? 1.0 : -1.0;
    double est = empirical_rademacher_finite(preds, 3000, 99);
    double massart = std::sqrt(static_cast<double>(n)) *
                     std::sqrt(2.0 * std::log(static_cast<double>(H))) / n;
    CHECK(est > 0.0);
    CHECK(est <= massart * 1.05);  // small MC slack
}

TEST_CASE("monte-carlo rademacher is seed-deterministic and thread-invariant") {
    Rng rng(21);
    std::vector<std::vector<double>> preds(8, std::vector<double>(33));
    for (auto& row : preds)
        for (double& v : row) v = rng.next_double() * 2.0 - 1.0;
    double a = empirical_rademacher_finite(preds, 500, 5, 1);
    double b = empirical_rademacher_finite(preds, 500, 5, 4);
    double c = empirical_rademacher_finite(preds, 500, 5, 7);
    CHECK(a == b);
    CHECK(b == c);
    double d = empirical_rademacher_finite(preds, 500, 6, 1);
    CHECK(a != d);
    CHECK_THROWS_AS(empirical_rademacher_finite({}, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(empirical_rademacher_finite(preds, 0, 0), std::invalid_argument);
}
