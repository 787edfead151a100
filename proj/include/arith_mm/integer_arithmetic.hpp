#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arith_mm/errors.hpp"

namespace arith_mm {

/// A positive integer together with its prime factorization.
struct FactoredInteger {
    std::uint64_t value = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;  // sorted by prime
    unsigned omega = 0;
    std::uint64_t radical = 1;

    bool operator==(const FactoredInteger&) const = default;
};

/// Rounds a non-negative double up by one unit in the last place.
inline double round_up_ulp(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

inline FactoredInteger factorize(std::uint64_t n)
{
    detail::require(n >= 1, "factorize: n must be >= 1");
    FactoredInteger out;
    out.value = n;
    auto take = [&](std::uint64_t p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) {
            out.factors.emplace_back(p, e);
            out.radical *= p;
        }
    };
    take(2);
    take(3);
    for (std::uint64_t p = 5; static_cast<unsigned __int128>(p) * p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) {
        out.factors.emplace_back(n, 1);
        out.radical *= n;
    }
    out.omega = static_cast<unsigned>(out.factors.size());
    return out;
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    const auto f = factorize(n);
    return f.factors.size() == 1 && f.factors.front().second == 1;
}

/// All primes <= limit, by the sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        if (i <= limit / i)
            for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

/// The first `count` primes.
inline std::vector<std::uint64_t> first_primes(std::uint64_t count)
{
    if (count == 0) return {};
    // p_k < k (ln k + ln ln k) for k >= 6
    double bound = 15.0;
    if (count >= 6) {
        const double k = static_cast<double>(count);
        bound = k * (std::log(k) + std::log(std::log(k))) + 1.0;
    }
    auto primes = primes_up_to(static_cast<std::uint64_t>(bound));
    detail::ensure(primes.size() >= count, "first_primes: sieve bound too small");
    primes.resize(count);
    return primes;
}

namespace detail {

inline constexpr std::uint64_t kPrimeTableSize = 1000000;

inline const std::vector<std::uint64_t>& prime_table()
{
    static const std::vector<std::uint64_t> table = first_primes(kPrimeTableSize);
    return table;
}

} // namespace detail

/// The x-th prime, p(1) = 2.
inline std::uint64_t nth_prime(std::uint64_t x)
{
    detail::require(x >= 1, "nth_prime: x must be >= 1");
    if (x > detail::kPrimeTableSize)
        throw cap_exceeded("nth_prime: index " + std::to_string(x) + " beyond the exact prime table (" +
                           std::to_string(detail::kPrimeTableSize) + ")");
    return detail::prime_table()[x - 1];
}

/// x ln x (1 + ln ln x), an upper bound for p(x) when x >= 4.
inline double rosser_upper(std::uint64_t x)
{
    detail::require(x >= 4, "rosser_upper: x must be >= 4");
    const double lx = std::log(static_cast<double>(x));
    return static_cast<double>(x) * lx * (1.0 + std::log(lx));
}

/// Jacobsthal's function g(d): the largest gap between consecutive integers coprime to d.
/// Scans one period of rad(d).
inline std::uint64_t jacobsthal(const FactoredInteger& d, std::uint64_t scan_cap = 100000000)
{
    if (d.radical > scan_cap)
        throw cap_exceeded("jacobsthal: radical " + std::to_string(d.radical) + " exceeds scan cap " +
                           std::to_string(scan_cap));
    std::vector<std::uint64_t> primes;
    for (const auto& [p, e] : d.factors) primes.push_back(p);
    const std::uint64_t period = d.radical;
    std::uint64_t best = 1;
    std::uint64_t last = 1;  // 1 is coprime to everything
    for (std::uint64_t m = 2; m <= period + 1; ++m) {
        bool coprime = true;
        for (auto p : primes)
            if (m % p == 0) {
                coprime = false;
                break;
            }
        if (coprime) {
            best = std::max(best, m - last);
            last = m;
        }
    }
    return best;
}

inline std::uint64_t jacobsthal(std::uint64_t d)
{
    detail::require(d >= 1, "jacobsthal: d must be >= 1");
    return jacobsthal(factorize(d));
}

struct JacobsthalBounds {
    std::uint64_t kanold = 1;        // 2^omega
    std::optional<double> stevens;   // 2 omega^(2 + 2e ln omega), omega >= 2 only
};

inline JacobsthalBounds jacobsthal_bounds(const FactoredInteger& d)
{
    JacobsthalBounds out;
    out.kanold = std::uint64_t{1} << d.omega;
    if (d.omega >= 2) {
        const double w = static_cast<double>(d.omega);
        out.stevens = 2.0 * std::pow(w, 2.0 + 2.0 * std::exp(1.0) * std::log(w));
    }
    return out;
}

/// rad(d / gcd(d, n)).
inline std::uint64_t squarefree_quotient(std::uint64_t d, std::uint64_t n)
{
    detail::require(d >= 1 && n >= 1, "squarefree_quotient: d and n must be >= 1");
    return factorize(d / std::gcd(d, n)).radical;
}

struct CoprimeShift {
    std::uint64_t k = 0;
    std::uint64_t value = 0;  // a + k n
    std::uint64_t bound = 1;  // g(d'), with k < bound
};

/// Smallest k >= 0 with gcd(a + k n, d) = 1.
inline CoprimeShift minimal_coprime_shift(std::uint64_t a, std::uint64_t n, std::uint64_t d)
{
    detail::require(n >= 1 && d >= 1, "coprime-shift: n and d must be >= 1");
    const std::uint64_t common = std::gcd(n, d);
    if (std::gcd(a % common, common) != 1 && common != 1)
        throw validation_error("coprime-shift: no solution exists in this progression (gcd(a, gcd(n, d)) != 1)");
    CoprimeShift out;
    out.bound = jacobsthal(squarefree_quotient(d, n));
    for (std::uint64_t k = 0; k <= d; ++k) {
        const unsigned __int128 v = static_cast<unsigned __int128>(a) + static_cast<unsigned __int128>(k) * n;
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw cap_exceeded("coprime-shift: a + k n exceeds 64 bits");
        const auto v64 = static_cast<std::uint64_t>(v);
        if (std::gcd(v64, d) == 1) {
            out.k = k;
            out.value = v64;
            detail::ensure(k < out.bound, "coprime-shift: k >= g(d') contradicts the Jacobsthal bound");
            return out;
        }
    }
    throw invariant_violation("coprime-shift: no k found within one period");
}

/// n^5.2 (omega(d) + 1): the comparator from the least-prime-in-progression estimate.
inline double linnik_comparator(std::uint64_t n, const FactoredInteger& d)
{
    detail::require(n >= 1, "linnik_comparator: n must be >= 1");
    return std::pow(static_cast<double>(n), 5.2) * static_cast<double>(d.omega + 1);
}

} // namespace arith_mm
