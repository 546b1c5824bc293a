#include <doctest.h>

#include <cmath>
#include <limits>

#include "exact_oracle.hpp"
#include "neat/hypergeom.hpp"
#include "neat/rng.hpp"

using namespace neat;
using neat::testing::exact_oracle_p;
using neat::testing::exact_oracle_pmf;

namespace {

HypergeomParams theta(std::int64_t n, std::int64_t K, std::int64_t N) { return {n, K, N}; }

}  // namespace

TEST_CASE("pmf matches exact binomial arithmetic") {
    CHECK(std::exp(log_pmf(2, theta(5, 4, 15))) == doctest::Approx(990.0 / 3003.0).epsilon(1e-13));
    CHECK(std::exp(log_pmf(0, theta(0, 5, 10))) == doctest::Approx(1.0));
    CHECK(log_pmf(5, theta(5, 4, 15)) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("tails of the directed worked example") {
    const auto t = tails(2, theta(5, 4, 15));
    CHECK(t.lower == doctest::Approx(1782.0 / 3003.0).epsilon(1e-12));
    CHECK(t.point == doctest::Approx(990.0 / 3003.0).epsilon(1e-12));
    CHECK(t.upper == doctest::Approx(231.0 / 3003.0).epsilon(1e-12));
    CHECK(t.lower + t.point + t.upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single-point upper tail") {
    const auto t = tails(3, theta(4, 4, 15));
    CHECK(t.upper == doctest::Approx(1.0 / 1365.0).epsilon(1e-12));
}

TEST_CASE("empty tail at the support boundary") {
    const auto sup = support(theta(5, 4, 15));
    const auto t = tails(sup.lo, theta(5, 4, 15));
    CHECK(t.lower == 0.0);
    const auto u = tails(sup.hi, theta(5, 4, 15));
    CHECK(u.upper == 0.0);
}

TEST_CASE("two-sided p-values of the worked examples") {
    CHECK(two_sided_p(2, theta(5, 4, 15)).p ==
          doctest::Approx(1452.0 / 3003.0).epsilon(1e-12));
    CHECK(two_sided_p(3, theta(4, 4, 15)).p == doctest::Approx(46.0 / 1365.0).epsilon(1e-12));
    CHECK(two_sided_p(4, theta(4, 15, 36)).p ==
          doctest::Approx(1365.0 / 58905.0).epsilon(1e-12));
}

TEST_CASE("two-sided p rejects counts outside the support") {
    CHECK_THROWS_AS(two_sided_p(5, theta(5, 4, 15)), BadInput);
    CHECK_THROWS_AS(two_sided_p(-1, theta(5, 4, 15)), BadInput);
}

TEST_CASE("null means of the worked examples") {
    CHECK(null_mean(theta(5, 4, 15)) == doctest::Approx(1.3333).epsilon(1e-4));
    CHECK(null_mean(theta(4, 4, 15)) == doctest::Approx(1.0667).epsilon(1e-4));
    CHECK(null_mean(theta(4, 15, 36)) == doctest::Approx(1.6667).epsilon(1e-4));
}

TEST_CASE("degenerate single-point support gives p = 1") {
    // all draws forced to be successes
    const auto r = two_sided_p(3, theta(3, 3, 3));
    CHECK(r.p == 1.0);
    CHECK(r.point == 1.0);
}

TEST_CASE("oracle frozen fractions") {
    const auto a = exact_oracle_p(2, theta(5, 4, 15));
    CHECK(a.p == 1452.0 / 3003.0);
    const auto b = exact_oracle_p(3, theta(4, 4, 15));
    CHECK(b.p == 46.0 / 1365.0);
    const auto c = exact_oracle_p(0, theta(7, 0, 12));  // K=0 forces k=0
    CHECK(c.p == 1.0);
    CHECK_THROWS_AS(exact_oracle_p(0, theta(5, 5, 20000)), BadInput);
}

TEST_CASE("oracle equivalence on random parameters") {
    Rng rng(0xbeefcafe);
    for (int it = 0; it < 2000; ++it) {
        const std::int64_t N = 1 + static_cast<std::int64_t>(rng.below(500));
        const std::int64_t n = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N + 1)));
        const std::int64_t K = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N + 1)));
        const auto th = theta(n, K, N);
        const auto sup = support(th);
        const std::int64_t k =
            sup.lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(sup.hi - sup.lo + 1)));

        const auto got = two_sided_p(k, th);
        const auto want = exact_oracle_p(k, th);
        CHECK(got.p == doctest::Approx(want.p).epsilon(1e-10));
        // p1 (before capping at 1) exceeds p by exactly the point mass
        const double p1 = 2.0 * std::min(got.lower_tail + got.point, got.upper_tail + got.point);
        CHECK(std::abs(p1 - got.p - got.point) < 1e-12);
        CHECK(got.p1_min == doctest::Approx(std::min(p1, 1.0)).epsilon(1e-12));
        CHECK(std::exp(log_pmf(k, th)) ==
              doctest::Approx(exact_oracle_pmf(k, th)).epsilon(1e-11));
    }
}

TEST_CASE("pmf sums to one over the support") {
    Rng rng(0x5eed);
    for (int it = 0; it < 25; ++it) {
        const std::int64_t N = 10 + static_cast<std::int64_t>(rng.below(1991));
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N)));
        const std::int64_t K = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N)));
        const auto th = theta(n, K, N);
        const auto sup = support(th);
        double sum = 0;
        for (std::int64_t k = sup.lo; k <= sup.hi; ++k) sum += std::exp(log_pmf(k, th));
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("draws and successes are exchangeable") {
    Rng rng(0x1234);
    for (int it = 0; it < 200; ++it) {
        const std::int64_t N = 2 + static_cast<std::int64_t>(rng.below(400));
        const std::int64_t n = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N + 1)));
        const std::int64_t K = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(N + 1)));
        const auto sup = support(theta(n, K, N));
        const std::int64_t k =
            sup.lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(sup.hi - sup.lo + 1)));
        const auto a = two_sided_p(k, theta(n, K, N));
        const auto b = two_sided_p(k, theta(K, n, N));
        CHECK(a.p == doctest::Approx(b.p).epsilon(1e-12));
    }
}

TEST_CASE("tails are monotone in k") {
    const auto th = theta(40, 60, 200);
    const auto sup = support(th);
    double prev_lower = -1, prev_upper = 2;
    for (std::int64_t k = sup.lo; k <= sup.hi; ++k) {
        const auto t = tails(k, th);
        CHECK(t.lower >= prev_lower - 1e-15);
        CHECK(t.upper <= prev_upper + 1e-15);
        prev_lower = t.lower;
        prev_upper = t.upper;
    }
}

TEST_CASE("log-space p-values survive extreme tails") {
    // far out in the tail of a large population: linear p underflows but
    // log10_p stays finite and matches the oracle
    const auto th = theta(4000, 4000, 9000);
    const auto sup = support(th);
    const auto r = two_sided_p(sup.hi, th);
    CHECK(std::isfinite(r.log10_p));
    CHECK(r.log10_p < -300.0);
    const auto want = exact_oracle_p(sup.hi, th);
    CHECK(r.log10_p == doctest::Approx(want.log10_p).epsilon(1e-9));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(null_mean(theta(5, 4, 0)), BadInput);
    CHECK_THROWS_AS(null_mean(theta(-1, 4, 10)), BadInput);
    CHECK_THROWS_AS(null_mean(theta(11, 4, 10)), BadInput);
    CHECK_THROWS_AS(null_mean(theta(5, 11, 10)), BadInput);
}
