#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "arith_mm/integer_arithmetic.hpp"

using namespace arith_mm;

namespace {

// trial-division oracle, independent of factorize
std::vector<std::pair<std::uint64_t, unsigned>> trial_factor(std::uint64_t n)
{
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

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

// the definition: least M such that every M consecutive integers hold one coprime to d
std::uint64_t jacobsthal_definition(std::uint64_t d)
{
    for (std::uint64_t M = 1;; ++M) {
        bool all = true;
        for (std::uint64_t start = 0; start < d && all; ++start) {
            bool found = false;
            for (std::uint64_t i = 0; i < M && !found; ++i) found = std::gcd(start + i, d) == 1;
            all = found;
        }
        if (all) return M;
    }
}

} // namespace

TEST(Factorize, SmallExamples)
{
    const auto f12 = factorize(12);
    ASSERT_EQ(f12.factors.size(), 2u);
    EXPECT_EQ(f12.factors[0], (std::pair<std::uint64_t, unsigned>{2, 2}));
    EXPECT_EQ(f12.factors[1], (std::pair<std::uint64_t, unsigned>{3, 1}));
    EXPECT_TRUE(factorize(1).factors.empty());
    EXPECT_EQ(factorize(1).radical, 1u);
    ASSERT_EQ(factorize(97).factors.size(), 1u);
    EXPECT_EQ(factorize(97).factors[0].first, 97u);
}

TEST(Factorize, AgreesWithTrialDivision)
{
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        const auto f = factorize(n);
        EXPECT_EQ(f.factors, trial_factor(n)) << n;
        std::uint64_t rad = 1;
        for (auto [p, e] : trial_factor(n)) rad *= p;
        EXPECT_EQ(f.radical, rad);
        EXPECT_EQ(f.omega, trial_factor(n).size());
    }
    const std::uint64_t big = 4294967291ull * 4294967279ull;  // two 32-bit primes
    const auto f = factorize(big);
    ASSERT_EQ(f.factors.size(), 2u);
    EXPECT_EQ(f.factors[0].first, 4294967279ull);
    EXPECT_EQ(f.factors[1].first, 4294967291ull);
}

TEST(Factorize, RejectsZero) { EXPECT_THROW(factorize(0), validation_error); }

TEST(NthPrime, MatchesSieve)
{
    EXPECT_EQ(nth_prime(1), 2u);
    EXPECT_EQ(nth_prime(4), 7u);
    EXPECT_EQ(nth_prime(25), 97u);
    const auto primes = sieve(200000);
    for (std::uint64_t x = 1; x <= primes.size(); x += 97) EXPECT_EQ(nth_prime(x), primes[x - 1]);
    EXPECT_THROW(nth_prime(0), validation_error);
}

TEST(Rosser, BoundsAndDomain)
{
    EXPECT_NEAR(rosser_upper(4), 4 * std::log(4.0) * (1 + std::log(std::log(4.0))), 1e-9);
    EXPECT_GE(rosser_upper(4), 7.0);
    EXPECT_GE(rosser_upper(10), 29.0);
    EXPECT_NEAR(rosser_upper(10), 10 * std::log(10.0) * (1 + std::log(std::log(10.0))), 1e-9);
    EXPECT_THROW(rosser_upper(3), validation_error);
}

TEST(Jacobsthal, Examples)
{
    EXPECT_EQ(jacobsthal(1), 1u);
    EXPECT_EQ(jacobsthal(10), 4u);
    EXPECT_EQ(jacobsthal(30), 6u);
    EXPECT_EQ(jacobsthal(2), 2u);
    EXPECT_THROW(jacobsthal(std::uint64_t{0}), validation_error);
}

TEST(Jacobsthal, AgreesWithDefinition)
{
    for (std::uint64_t d = 1; d <= 400; ++d) EXPECT_EQ(jacobsthal(d), jacobsthal_definition(d)) << d;
    // primorials: known values g(2*3*5*7) = 10, g(2*3*5*7*11) = 14
    EXPECT_EQ(jacobsthal(210), jacobsthal_definition(210));
    EXPECT_EQ(jacobsthal(2310), jacobsthal_definition(2310));
}

TEST(Jacobsthal, ScanCap)
{
    // 2*3*5*...*47: the residue scan needs rad(d) steps
    const std::uint64_t primorial = 614889782588491410ull;
    EXPECT_THROW(jacobsthal(factorize(primorial), 1000), cap_exceeded);
}

TEST(JacobsthalBounds, KanoldAndStevens)
{
    EXPECT_EQ(jacobsthal_bounds(factorize(30)).kanold, 8u);
    EXPECT_EQ(jacobsthal_bounds(factorize(2)).kanold, 2u);
    EXPECT_EQ(jacobsthal_bounds(factorize(1)).kanold, 1u);
    EXPECT_FALSE(jacobsthal_bounds(factorize(1)).stevens.has_value());
    EXPECT_FALSE(jacobsthal_bounds(factorize(8)).stevens.has_value());
    const auto s = jacobsthal_bounds(factorize(30)).stevens;
    ASSERT_TRUE(s.has_value());
    EXPECT_NEAR(*s, 2 * std::pow(3.0, 2 + 2 * std::exp(1.0) * std::log(3.0)), 1e-6);
}

TEST(SquarefreeQuotient, Examples)
{
    EXPECT_EQ(squarefree_quotient(12, 4), 3u);
    EXPECT_EQ(squarefree_quotient(10, 3), 10u);
    EXPECT_EQ(squarefree_quotient(8, 2), 2u);
}

TEST(CoprimeShift, Examples)
{
    EXPECT_EQ(minimal_coprime_shift(1, 1, 6).k, 0u);
    const auto s = minimal_coprime_shift(2, 3, 10);
    EXPECT_EQ(s.k, 3u);
    EXPECT_EQ(s.value, 11u);
    EXPECT_EQ(s.bound, 4u);
    EXPECT_THROW(minimal_coprime_shift(2, 2, 4), validation_error);
}

TEST(CoprimeShift, ExhaustiveSmall)
{
    for (std::uint64_t n = 1; n <= 20; ++n)
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t d = 1; d <= 120; ++d) {
                if (std::gcd(a, std::gcd(n, d)) != 1) {
                    EXPECT_THROW(minimal_coprime_shift(a, n, d), validation_error);
                    continue;
                }
                std::uint64_t k = 0;
                while (std::gcd(a + k * n, d) != 1) ++k;
                const auto s = minimal_coprime_shift(a, n, d);
                EXPECT_EQ(s.k, k);
                EXPECT_LT(s.k, s.bound);
            }
}

TEST(Linnik, Comparator)
{
    EXPECT_DOUBLE_EQ(linnik_comparator(1, factorize(1)), 1.0);
    EXPECT_NEAR(linnik_comparator(2, factorize(30)), std::pow(2.0, 5.2) * 4, 1e-9);
    EXPECT_NEAR(linnik_comparator(3, factorize(1)), std::pow(3.0, 5.2), 1e-9);
    EXPECT_NEAR(linnik_comparator(3, factorize(1)), 302.71, 0.01);
}

TEST(IsPrime, MatchesSieve)
{
    const auto primes = sieve(10000);
    std::vector<bool> is(10001, false);
    for (auto p : primes) is[p] = true;
    for (std::uint64_t n = 0; n <= 10000; ++n) EXPECT_EQ(is_prime(n), is[n]) << n;
}
