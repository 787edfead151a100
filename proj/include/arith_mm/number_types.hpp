#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "arith_mm/errors.hpp"

namespace arith_mm {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& v)
{
    const BigInt num = boost::multiprecision::numerator(v);
    const BigInt den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline BigInt pow_big(const BigInt& base, std::uint64_t exponent)
{
    BigInt out;
    mpz_pow_ui(out.backend().data(), base.backend().data(), static_cast<unsigned long>(exponent));
    return out;
}

inline Rational pow_rat(const Rational& base, std::uint64_t exponent)
{
    return Rational(pow_big(boost::multiprecision::numerator(base), exponent),
                    pow_big(boost::multiprecision::denominator(base), exponent));
}

inline std::size_t bit_length(const BigInt& v)
{
    if (v == 0) return 0;
    return mpz_sizeinbase(v.backend().data(), 2);
}

/// Largest r >= 0 with r^k <= x (x >= 0, k >= 1).
inline BigInt root_floor(const BigInt& x, std::uint64_t k)
{
    detail::require(x >= 0 && k >= 1, "root_floor: need x >= 0 and k >= 1");
    BigInt out;
    mpz_root(out.backend().data(), x.backend().data(), static_cast<unsigned long>(k));
    return out;
}

/// Smallest r >= 0 with r^k >= x (x >= 0, k >= 1).
inline BigInt root_ceil(const BigInt& x, std::uint64_t k)
{
    BigInt r = root_floor(x, k);
    if (pow_big(r, k) < x) ++r;
    return r;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b)
{
    BigInt q = a / b;
    if (q * b < a) ++q;
    return q;
}

inline BigInt ceil_rat(const Rational& v)
{
    const BigInt num = boost::multiprecision::numerator(v);
    const BigInt den = boost::multiprecision::denominator(v);
    BigInt q = num / den;
    if (q * den < num) ++q;
    return q;
}

/// An integer >= base^exponent for rational base >= 0 and rational exponent >= 0.
/// Exact whenever the power is an integer.
inline BigInt pow_ceil(const Rational& base, const Rational& exponent, std::size_t bit_budget)
{
    detail::require(base >= 0 && exponent >= 0, "pow_ceil: negative input");
    const BigInt p = boost::multiprecision::numerator(base);
    const BigInt q = boost::multiprecision::denominator(base);
    const BigInt r = boost::multiprecision::numerator(exponent);
    const BigInt s = boost::multiprecision::denominator(exponent);
    if (r == 0) return 1;
    if (p == 0) return 0;
    detail::ensure(r.sign() > 0 && s.sign() > 0, "pow_ceil: bad exponent");
    const auto ri = r.convert_to<std::uint64_t>();
    const auto si = s.convert_to<std::uint64_t>();
    const double est_bits = static_cast<double>(bit_length(p)) * static_cast<double>(ri);
    if (est_bits > static_cast<double>(bit_budget))
        throw cap_exceeded("big-integer budget exceeded evaluating a power (" +
                           std::to_string(static_cast<std::uint64_t>(est_bits)) + " bits)");
    const BigInt top = root_ceil(pow_big(p, ri), si);
    const BigInt bottom = root_floor(pow_big(q, ri), si);
    return ceil_div(top, bottom);
}

inline void check_bits(const BigInt& v, std::size_t bit_budget, const char* what)
{
    if (bit_length(v) > bit_budget)
        throw cap_exceeded(std::string("big-integer budget exceeded: ") + what);
}

} // namespace arith_mm
