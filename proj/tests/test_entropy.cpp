#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "expander/entropy.hpp"
#include "expander/errors.hpp"

using namespace expander;

namespace {

// exact Pascal-triangle binomials, independent of the lgamma path
std::vector<std::vector<double>> pascal(int max_n) {
    std::vector<std::vector<double>> c(max_n + 1);
    for (int n = 0; n <= max_n; ++n) {
        c[n].assign(n + 1, 1.0);
        for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
    }
    return c;
}

}  // namespace

TEST_CASE("shannon_entropy boundary and frozen values") {
    CHECK(shannon_entropy(0.0) == 0.0);
    CHECK(shannon_entropy(1.0) == 0.0);
    CHECK(shannon_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // ln 3 - (2/3) ln 2
    CHECK(shannon_entropy(1.0 / 3.0) ==
          doctest::Approx(0.63651416829481278).epsilon(1e-14));
    CHECK(shannon_entropy(0.25) ==
          doctest::Approx(0.56233514461880829).epsilon(1e-14));
}

TEST_CASE("shannon_entropy clamp band") {
    CHECK(shannon_entropy(-5e-13) == 0.0);
    CHECK(shannon_entropy(1.0 + 5e-13) == 0.0);
    CHECK_THROWS_AS(shannon_entropy(-1e-11), DomainError);
    CHECK_THROWS_AS(shannon_entropy(1.0 + 1e-11), DomainError);
    CHECK_THROWS_AS(shannon_entropy(2.0), DomainError);
}

TEST_CASE("shannon_entropy symmetry and nonnegativity") {
    for (int i = 0; i <= 1000; ++i) {
        const double p = i / 1000.0;
        CHECK(shannon_entropy(p) >= 0.0);
        CHECK(shannon_entropy(p) ==
              doctest::Approx(shannon_entropy(1.0 - p)).epsilon(1e-12));
    }
}

TEST_CASE("p_max frozen values and power law") {
    CHECK(p_max(1, 1) == doctest::Approx(0.031915382432114614).epsilon(1e-14));
    CHECK(p_max(2, 8) == doctest::Approx(4.9867785050179084e-4).epsilon(1e-13));
    // doubling s scales by 2^(-3/2)
    for (double s : {1.0, 3.0, 17.0})
        for (double d : {1.0, 5.0, 64.0})
            CHECK(p_max(s, d) / p_max(2 * s, d) ==
                  doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
}

TEST_CASE("p_max bounded and monotone decreasing") {
    double prev_row = 1.0;
    for (int s = 1; s <= 64; s *= 2) {
        double prev = 1.0;
        for (int d = 1; d <= 64; d *= 2) {
            const double v = p_max(s, d);
            CHECK(v > 0.0);
            CHECK(v <= 0.032);
            CHECK(v < prev);
            prev = v;
        }
        CHECK(p_max(s, 1) <= prev_row);
        prev_row = p_max(s, 1);
    }
    CHECK_THROWS_AS(p_max(0, 1), DomainError);
    CHECK_THROWS_AS(p_max(1, 0), DomainError);
}

TEST_CASE("log_p_max agrees with ln(p_max)") {
    for (double s : {1.0, 2.0, 64.0, 1000.0})
        for (double d : {1.0, 8.0, 128.0})
            CHECK(log_p_max(s, d) ==
                  doctest::Approx(std::log(p_max(s, d))).epsilon(1e-13));
}

TEST_CASE("log_binomial frozen values, symmetry, errors") {
    CHECK(log_binomial(5, 0) == 0.0);
    CHECK(log_binomial(5, 5) == 0.0);
    CHECK(log_binomial(8, 2) == doctest::Approx(std::log(28.0)).epsilon(1e-13));
    for (int64_t n : {3, 10, 57})
        for (int64_t k = 0; k <= n; ++k)
            CHECK(log_binomial(n, k) == log_binomial(n, n - k));
    CHECK_THROWS_AS(log_binomial(3, 4), DomainError);
    CHECK_THROWS_AS(log_binomial(-1, 0), DomainError);
    CHECK_THROWS_AS(log_binomial(3, -1), DomainError);
}

TEST_CASE("log_binomial matches exact Pascal values up to n = 64") {
    const auto c = pascal(64);
    for (int n = 1; n <= 64; ++n)
        for (int k = 0; k <= n; ++k)
            CHECK(log_binomial(n, k) ==
                  doctest::Approx(std::log(c[n][k])).epsilon(1e-12));
}

TEST_CASE("entropy upper-bounds the log-binomial") {
    for (int n = 1; n <= 64; ++n)
        for (int k = 0; k <= n; ++k)
            CHECK(n * shannon_entropy(static_cast<double>(k) / n) >=
                  log_binomial(n, k) - 1e-12);
}
