#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "arith_mm/effective_bounds.hpp"

using namespace arith_mm;

namespace {

std::vector<std::uint64_t> sieve(std::uint64_t limit)
{
    std::vector<bool> comp(limit + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
    }
    return out;
}

unsigned omega_of(std::uint64_t n)
{
    unsigned w = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            ++w;
            while (n % p == 0) n /= p;
        }
    return w + (n > 1);
}

std::uint64_t g_scan(std::uint64_t d)
{
    std::uint64_t best = 0, run = 0;
    for (std::uint64_t m = 1; m <= 2 * d; ++m) {
        run = std::gcd(m, d) == 1 ? 0 : run + 1;
        best = std::max(best, run);
    }
    return best + 1;
}

// ceil(D^(1/k)) by counting up
std::uint64_t ceil_root(std::uint64_t D, unsigned k)
{
    std::uint64_t r = 1;
    while (pow_big(BigInt(r), k) < D) ++r;
    return r;
}

BoundParams params(std::uint64_t D, unsigned Delta, unsigned c, std::uint64_t d = 1, std::uint64_t p = 0)
{
    BoundParams out;
    out.D = D;
    out.Delta = Delta;
    out.c = c;
    out.d = d;
    out.p = p;
    return out;
}

const std::vector<std::uint64_t>& primes()
{
    static const auto table = sieve(100000);
    return table;
}

} // namespace

TEST(XValue, Examples)
{
    EXPECT_EQ(x_value(params(1, 1, 1)), 3);
    EXPECT_EQ(x_value(params(16, 1, 1, 6)), 21);
    EXPECT_EQ(x_value(params(2, 1, 2, 2)), 6);
}

TEST(XValue, FormulaOnGrid)
{
    for (std::uint64_t D = 1; D <= 40; ++D)
        for (std::uint64_t d = 1; d <= 40; ++d)
            for (unsigned c = 1; c <= 3; ++c)
                EXPECT_EQ(x_value(params(D, 1, c, d)), ceil_root(D, 4 * c) + D + omega_of(d) + 1);
    auto p = params(5, 1, 1, 6);
    p.x_variant = XVariant::doubled;
    EXPECT_EQ(x_value(p), 2 * 5 + 2 + 1);
}

TEST(CapitalN, Examples)
{
    EXPECT_EQ(capital_n(params(1, 1, 1)), 5);
    EXPECT_EQ(capital_n(params(1, 1, 1, 1, 2)), 10);
    EXPECT_EQ(capital_n(params(1, 1, 2)), 25);
}

TEST(CapitalN, OracleGrid)
{
    for (std::uint64_t D = 1; D <= 20; ++D)
        for (std::uint64_t d = 1; d <= 30; ++d)
            for (std::uint64_t p : {0, 2, 3, 7}) {
                const auto bp = params(D, 1, 1, d, p);
                const auto x = ceil_root(D, 4) + D + omega_of(d) + 1;
                const auto expected = BigInt(primes()[x - 1]) * g_scan(p ? d * p : d);
                EXPECT_EQ(n_value(bp), primes()[x - 1]);
                EXPECT_EQ(capital_n(bp), expected);
            }
}

TEST(SigmaSet, Examples)
{
    std::vector<BigInt> s1{1, 2, 3, 4, 5};
    EXPECT_EQ(sigma_set(params(1, 1, 1)), s1);
    // d = 2 has omega = 1, so x = 4 and N = p(4) g(2) = 14
    EXPECT_EQ(capital_n(params(1, 1, 1, 2)), 14);
    std::vector<BigInt> s2{1, 3, 5, 7, 9, 11, 13};
    EXPECT_EQ(sigma_set(params(1, 1, 1, 2)), s2);
    std::vector<BigInt> s3;
    for (std::uint64_t m = 1; m <= 50; m += 2) s3.push_back(BigInt(m * m));
    EXPECT_EQ(sigma_set(params(1, 1, 2, 1, 2)), s3);
}

TEST(SigmaSet, SizeMatchesEnumeration)
{
    for (std::uint64_t d = 1; d <= 60; ++d)
        for (std::uint64_t p : {0, 2, 5, 11}) {
            const auto bp = params(3, 1, 1, d, p);
            EXPECT_EQ(sigma_size(bp), BigInt(sigma_set(bp).size())) << d << " " << p;
        }
}

TEST(SigmaSet, CapExceeded)
{
    Caps caps;
    caps.sigma_elements = 3;
    EXPECT_THROW(sigma_set(params(1, 1, 1), caps), cap_exceeded);
}

TEST(FBound, Examples)
{
    EXPECT_EQ(f_bound(params(1, 1, 1)), 25);
    EXPECT_EQ(f_bound(params(1, 0, 1)), 1);
    EXPECT_EQ(f_bound(params(2, 1, 1)), 484);
}

TEST(IteratedF, Chain)
{
    EXPECT_EQ(iterated_f(params(7, 2, 1), 0), 7);
    EXPECT_EQ(iterated_f(params(1, 1, 1), 1), 25);
    // Delta = 2: f_1 = 1 * (5 * 1)^4, f_2 = 625^2 (p(x) * 1)^4 with x = ceil(625^(1/4)) + 625 + 1
    const BigInt f1 = 625;
    const std::uint64_t x = ceil_root(625, 4) + 625 + 0 + 1;
    const BigInt f2 = f1 * f1 * pow_big(BigInt(primes()[x - 1]), 4);
    const auto chain = iterate_chain(params(1, 2, 1));
    ASSERT_EQ(chain.values.size(), 3u);
    EXPECT_EQ(chain.values[1], f1);
    EXPECT_EQ(chain.values[2], f2);
    EXPECT_TRUE(chain.exact[2]);
    EXPECT_THROW(iterated_f(params(1, 1, 1), 2), validation_error);
}

TEST(IteratedF, MonotoneAndUpperBoundBeyondTable)
{
    const auto chain = iterate_chain(params(2, 3, 1, 6));
    for (std::size_t i = 1; i < chain.values.size(); ++i) EXPECT_GT(chain.values[i], chain.values[i - 1]);
    // the last step uses p(x) for x far beyond the exact prime table
    EXPECT_FALSE(chain.exact.back());
}

TEST(ExponentConstants, Examples)
{
    auto k = exponent_constants(1, 1, Rational(1, 2));
    EXPECT_EQ(k.lambda, 0);
    EXPECT_EQ(k.delta, 2);
    EXPECT_EQ(k.delta_prime, 0);
    k = exponent_constants(2, 1, Rational(1, 2));
    EXPECT_EQ(k.lambda, Rational(3, 2));
    EXPECT_EQ(k.delta, 10);
    EXPECT_EQ(k.delta_prime, 6);
    k = exponent_constants(0, 3, Rational(1, 2));
    EXPECT_EQ(k.lambda, 0);
    EXPECT_EQ(k.delta, 1);
    EXPECT_EQ(k.delta_prime, 0);
    EXPECT_THROW(exponent_constants(1, 0, Rational(1, 2)), validation_error);
}

TEST(FinalDelta, DeltaZeroAndOne)
{
    EXPECT_EQ(final_delta(params(5, 0, 2)), 1);
    // Delta = 1, c = 1, D = 1 reduces to d >= (omega(d) + 1)^2
    const auto report = threshold_analysis(params(1, 1, 1));
    EXPECT_EQ(report.value, 7);
    EXPECT_TRUE(report.exhaustive);
    ASSERT_TRUE(report.last_violator.has_value());
    EXPECT_EQ(*report.last_violator, 6);
    std::uint64_t last_bad = 0;
    for (std::uint64_t d = 1; d <= 200000; ++d) {
        const std::uint64_t w = omega_of(d) + 1;
        if (d < w * w) last_bad = d;
    }
    EXPECT_EQ(last_bad + 1, 7u);
}

TEST(FinalDelta, RegressionPinned)
{
    const auto T = final_delta(params(2, 2, 1));
    EXPECT_EQ(to_string(T),
              "461837142733311595741868347837303014471452359482974828785986022471352471881043312701479146259423923"
              "779690478103184156268363081055381203964750269576386060258115584");
}

TEST(FinalDelta, KanoldDeltaThreeIsUnreachable)
{
    EXPECT_THROW(final_delta(params(1, 3, 1)), cap_exceeded);
}

TEST(BoundParams, Validation)
{
    EXPECT_THROW(f_bound(params(0, 1, 1)), validation_error);
    EXPECT_THROW(f_bound(params(1, 1, 0)), validation_error);
    EXPECT_THROW(f_bound(params(1, 1, 1, 0)), validation_error);
    EXPECT_THROW(f_bound(params(1, 1, 1, 1, 4)), validation_error);
}

TEST(BoundReport, Consistent)
{
    const auto r = bound_report(params(2, 1, 1, 6, 5));
    EXPECT_EQ(r.f_value, r.f_iterates.values.back());
    EXPECT_EQ(r.threshold.value, final_delta(params(2, 1, 1, 6, 5)));
    EXPECT_EQ(r.capital_n, capital_n(params(2, 1, 1, 6, 5)));
}
