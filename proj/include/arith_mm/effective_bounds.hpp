#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "arith_mm/caps.hpp"
#include "arith_mm/errors.hpp"
#include "arith_mm/integer_arithmetic.hpp"
#include "arith_mm/number_types.hpp"

namespace arith_mm {

/// How g(d) is bounded in terms of omega(d) when deriving the order threshold.
///
/// The Kanold profile bounds g(d) <= 2^omega directly during the search and uses the power
/// envelope 2 omega^4 (valid for omega <= 16, i.e. every 64-bit d) in the closed form.
/// Power profiles bound g(d) <= alpha omega^beta everywhere.
struct JacobsthalProfile {
    std::string name = "kanold";
    std::uint64_t alpha = 2;
    std::uint64_t beta = 4;
    bool exponential = true;

    static JacobsthalProfile kanold() { return {}; }

    /// 2 omega^(2 + 2e ln omega) is at most 2 omega^17 while omega <= 16.
    static JacobsthalProfile stevens() { return {"stevens", 2, 17, false}; }

    static JacobsthalProfile power(std::uint64_t alpha, std::uint64_t beta)
    {
        return {"power", alpha, beta, false};
    }

    static constexpr unsigned kMaxOmega = 16;

    /// Upper bound for g(m) when omega(m) <= omega.
    BigInt g_bound(unsigned omega) const
    {
        if (exponential) return pow_big(BigInt(2), omega);
        if (omega == 0) return 1;
        return BigInt(alpha) * pow_big(BigInt(omega), beta);
    }

    /// alpha omega^beta >= 2^omega on the whole range of 64-bit omegas.
    bool dominates_kanold() const
    {
        for (unsigned w = 1; w <= kMaxOmega; ++w)
            if (BigInt(alpha) * pow_big(BigInt(w), beta) < pow_big(BigInt(2), w)) return false;
        return true;
    }
};

/// Which prime index x to use: ceil(D^(1/4c)) + D + omega(d) + 1, or 2D + omega(d) + 1.
enum class XVariant { ceil_root, doubled };

struct BoundParams {
    std::uint64_t D = 1;
    unsigned Delta = 0;
    unsigned c = 1;
    std::uint64_t d = 1;
    std::uint64_t p = 0;
    Rational eps{1, 2};
    JacobsthalProfile profile = JacobsthalProfile::kanold();
    XVariant x_variant = XVariant::ceil_root;

    void validate() const
    {
        detail::require(D >= 1, "D must be >= 1");
        detail::require(c >= 1, "c must be >= 1");
        detail::require(d >= 1, "d must be >= 1");
        detail::require(eps > 0, "eps must be positive");
        detail::require(Delta <= 64, "Delta must be <= 64");
        detail::require(p == 0 || is_prime(p),
                        "p must be 0 or a prime");
        detail::require(p <= 1 || d <= std::numeric_limits<std::uint64_t>::max() / p, "d * p overflows");
        detail::require(profile.alpha >= 1 && profile.beta >= 1, "alpha and beta must be positive");
        detail::require(profile.exponential || profile.dominates_kanold(),
                        "alpha omega^beta must dominate 2^omega for omega <= 16");
    }

    std::uint64_t d_times_p() const { return p >= 2 ? d * p : d; }
};

struct ExponentConstants {
    Rational lambda;
    Rational delta;
    Rational delta_prime;
};

/// lambda = c^2 (Delta^2 - Delta)/2 (1 + eps), delta = 2^Delta (1 + lambda), delta' = 2^Delta lambda / c.
inline ExponentConstants exponent_constants(unsigned Delta, unsigned c, const Rational& eps)
{
    detail::require(c >= 1, "c must be >= 1");
    detail::require(eps > 0, "eps must be positive");
    const Rational delta_sq_minus(static_cast<long long>(Delta) * Delta - Delta, 2);
    ExponentConstants out;
    out.lambda = Rational(static_cast<long long>(c) * c) * delta_sq_minus * (Rational(1) + eps);
    const Rational two_pow(pow_big(BigInt(2), Delta));
    out.delta = two_pow * (Rational(1) + out.lambda);
    out.delta_prime = two_pow * out.lambda / Rational(c);
    return out;
}

namespace detail {

inline BigInt x_for_degree(const BigInt& degree, unsigned omega, unsigned c, XVariant variant)
{
    if (variant == XVariant::doubled) return 2 * degree + omega + 1;
    return root_ceil(degree, 4ull * c) + degree + omega + 1;
}

struct PrimeValue {
    BigInt value;
    bool exact = true;
};

/// p(x) exactly while x is inside the prime table; otherwise the ceiling of a guarded
/// x ln x (1 + ln ln x), which bounds p(x) from above for x >= 6.
inline PrimeValue prime_at_or_upper(const BigInt& x)
{
    if (x <= BigInt(kPrimeTableSize)) return {BigInt(nth_prime(x.convert_to<std::uint64_t>())), true};
    const std::size_t bits = bit_length(x);
    double lx = 0.0;
    if (bits <= 1000) {
        lx = std::log(x.convert_to<double>()) * (1.0 + 1e-12) + 1e-12;
    } else {
        lx = static_cast<double>(bits) * std::log(2.0) * (1.0 + 1e-12);
    }
    const double factor = round_up_ulp(lx * (1.0 + std::log(lx)) * (1.0 + 1e-12));
    const double scale = 1073741824.0;  // 2^30
    const BigInt num(static_cast<unsigned long long>(std::ceil(factor * scale)) + 1);
    return {ceil_div(x * num, BigInt(1073741824)), false};
}

/// f(D, d) for an arbitrary degree argument, all other parameters from `params`.
inline BigInt f_of_degree(const BoundParams& params, const BigInt& degree, std::uint64_t g_value,
                          unsigned omega, bool& exact, std::size_t bit_budget)
{
    const BigInt x = x_for_degree(degree, omega, params.c, params.x_variant);
    const PrimeValue n = prime_at_or_upper(x);
    exact = exact && n.exact;
    const std::uint64_t outer = 2ull * params.c * params.Delta;
    const double est = static_cast<double>(bit_length(n.value)) * params.c * static_cast<double>(outer) +
                       2.0 * static_cast<double>(bit_length(degree));
    if (est > static_cast<double>(bit_budget))
        throw cap_exceeded("big-integer budget exceeded evaluating f (about " +
                           std::to_string(static_cast<std::uint64_t>(est)) + " bits)");
    const BigInt capital_n = pow_big(n.value, params.c) * g_value;
    return degree * degree * pow_big(capital_n, outer);
}

} // namespace detail

inline BigInt x_value(const BoundParams& params)
{
    params.validate();
    return detail::x_for_degree(BigInt(params.D), factorize(params.d).omega, params.c, params.x_variant);
}

/// n = p(x); throws cap_exceeded if x is outside the exact prime table.
inline BigInt n_value(const BoundParams& params)
{
    const BigInt x = x_value(params);
    if (x > BigInt(detail::kPrimeTableSize)) throw cap_exceeded("x beyond the exact prime table");
    return BigInt(nth_prime(x.convert_to<std::uint64_t>()));
}

/// N = p(x)^c g(d max{1, p}).
inline BigInt capital_n(const BoundParams& params)
{
    params.validate();
    return pow_big(n_value(params), params.c) * jacobsthal(params.d_times_p());
}

/// #Sigma, by inclusion-exclusion over the primes of d max{1,p}.
inline BigInt sigma_size(const BoundParams& params)
{
    const BigInt bound = capital_n(params);
    const auto f = factorize(params.d_times_p());
    BigInt total = 0;
    const std::size_t k = f.factors.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        BigInt prod = 1;
        int bits = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::uint64_t{1} << i)) {
                prod *= f.factors[i].first;
                ++bits;
            }
        if (bits % 2 == 0)
            total += bound / prod;
        else
            total -= bound / prod;
    }
    return total;
}

/// Sigma = { m^c : 1 <= m <= N, gcd(m, d) = 1, p does not divide m }, sorted ascending.
inline std::vector<BigInt> sigma_set(const BoundParams& params, const Caps& caps = Caps{})
{
    const BigInt bound = capital_n(params);
    if (bound > BigInt(caps.sigma_elements))
        throw cap_exceeded("sigma_set: N = " + to_string(bound) + " exceeds enumeration cap " +
                           std::to_string(caps.sigma_elements));
    const auto limit = bound.convert_to<std::uint64_t>();
    std::vector<BigInt> out;
    for (std::uint64_t m = 1; m <= limit; ++m) {
        if (std::gcd(m, params.d) != 1) continue;
        if (params.p >= 2 && m % params.p == 0) continue;
        out.push_back(pow_big(BigInt(m), params.c));
    }
    return out;
}

/// f(D, d) = D^2 (p(x)^c g(d max{1,p}))^(2 c Delta).
inline BigInt f_bound(const BoundParams& params, const Caps& caps = Caps{})
{
    params.validate();
    const auto fd = factorize(params.d);
    bool exact = true;
    const BigInt out = detail::f_of_degree(params, BigInt(params.D), jacobsthal(params.d_times_p()), fd.omega,
                                           exact, caps.bigint_bits);
    if (!exact) throw cap_exceeded("f_bound: x beyond the exact prime table");
    return out;
}

struct IterateChain {
    std::vector<BigInt> values;  // f_0 .. f_Delta
    /// False once some iterate used the upper bound for p(x) instead of p(x) itself;
    /// from that index on the values are upper bounds.
    std::vector<bool> exact;
};

/// f_0 = D, f_{i+1} = f(f_i, d), for i = 0 .. Delta.
inline IterateChain iterate_chain(const BoundParams& params, const Caps& caps = Caps{},
                                  std::optional<unsigned> upto = std::nullopt)
{
    params.validate();
    const unsigned steps = upto ? std::min(*upto, params.Delta) : params.Delta;
    const auto fd = factorize(params.d);
    const std::uint64_t g = jacobsthal(params.d_times_p());
    IterateChain out;
    out.values.push_back(BigInt(params.D));
    out.exact.push_back(true);
    bool exact = true;
    for (unsigned i = 0; i < steps; ++i) {
        out.values.push_back(detail::f_of_degree(params, out.values.back(), g, fd.omega, exact, caps.bigint_bits));
        out.exact.push_back(exact);
    }
    return out;
}

inline BigInt iterated_f(const BoundParams& params, unsigned i, const Caps& caps = Caps{})
{
    detail::require(i <= params.Delta, "iterated_f: i must be <= Delta");
    return iterate_chain(params, caps, i).values.at(i);
}

/// Whether n = p(x_D) <= max{D, omega(d) + 1}^(1 + eps), the slack the iterate estimate assumes.
inline bool eps_slack_holds(const BoundParams& params)
{
    params.validate();
    const unsigned omega = factorize(params.d).omega;
    const BigInt x = detail::x_for_degree(BigInt(params.D), omega, params.c, XVariant::doubled);
    const detail::PrimeValue n = detail::prime_at_or_upper(x);
    const BigInt d_star = std::max(BigInt(params.D), BigInt(omega + 1));
    const Rational e = Rational(1) + params.eps;
    // n <= d_star^(num/den)  <=>  n^den <= d_star^num
    const auto num = boost::multiprecision::numerator(e).convert_to<std::uint64_t>();
    const auto den = boost::multiprecision::denominator(e).convert_to<std::uint64_t>();
    return pow_big(n.value, den) <= pow_big(d_star, num);
}

// ---------------------------------------------------------------------------
// Order threshold
// ---------------------------------------------------------------------------

struct ThresholdReport {
    BigInt search_threshold = 1;
    BigInt closed_form = 1;
    BigInt value = 1;  // max of the two
    bool exhaustive = false;            // search refined by a per-d scan with exact omega(d)
    std::optional<BigInt> last_violator;  // only when exhaustive
    unsigned certified_from_omega = 0;  // tail certified for every primorial interval from here on
    BigInt alpha_prime = 1;             // ceil(alpha^delta')
    Rational beta_prime = 0;            // delta' beta + delta
};

/// Exact test of both inequalities
///   m >= (omega + 1)^delta (2 G)^delta'  and  m >= D^delta (2 G)^delta'
/// where G bounds g(m max{1,p}) for a value m with omega(m) <= omega.
class ThresholdInequalities {
public:
    explicit ThresholdInequalities(const BoundParams& params)
        : params_(params), k_(exponent_constants(params.Delta, params.c, params.eps))
    {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        const BigInt b1 = denominator(k_.delta);
        const BigInt b2 = denominator(k_.delta_prime);
        const BigInt l = (b1 / gcd(b1, b2)) * b2;
        lcm_ = l.convert_to<std::uint64_t>();
        delta_l_ = (numerator(k_.delta) * (l / b1)).convert_to<std::uint64_t>();
        delta_prime_l_ = (numerator(k_.delta_prime) * (l / b2)).convert_to<std::uint64_t>();
        extra_ = params.p >= 2 ? 1u : 0u;
    }

    std::uint64_t lcm() const { return lcm_; }
    const ExponentConstants& constants() const { return k_; }

    /// max{omega+1, D}^(delta L) (2 G(omega + [p>1]))^(delta' L): both right-hand sides at once.
    BigInt rhs_power(unsigned omega) const
    {
        const BigInt base = std::max(BigInt(omega + 1), BigInt(params_.D));
        const BigInt g = 2 * params_.profile.g_bound(omega + extra_);
        return pow_big(base, delta_l_) * pow_big(g, delta_prime_l_);
    }

    bool hold(const BigInt& m, unsigned omega) const { return pow_big(m, lcm_) >= rhs_power(omega); }

    /// ln of rhs_power(omega)^(1/L), in floating point; only used to rule out hopeless searches.
    double log_root_rhs(unsigned omega) const
    {
        const double base = std::log(std::max(static_cast<double>(omega + 1), static_cast<double>(params_.D)));
        const unsigned w = omega + extra_;
        double lg = 0.0;
        if (params_.profile.exponential)
            lg = w * std::log(2.0);
        else if (w > 0)
            lg = std::log(static_cast<double>(params_.profile.alpha)) +
                 static_cast<double>(params_.profile.beta) * std::log(static_cast<double>(w));
        return k_.delta.convert_to<double>() * base + k_.delta_prime.convert_to<double>() * (std::log(2.0) + lg);
    }

private:
    BoundParams params_;
    ExponentConstants k_;
    std::uint64_t lcm_ = 1;
    std::uint64_t delta_l_ = 0;
    std::uint64_t delta_prime_l_ = 0;
    unsigned extra_ = 0;
};

namespace detail {

/// Closed-form comparator max{alpha' beta'^beta', alpha'^(beta'/(beta'-1)) D^(delta beta'/(beta'-1))}
/// rounded up, with alpha' = alpha^delta' and beta' = delta' beta + delta.
inline BigInt closed_form_threshold(const BoundParams& params, const ExponentConstants& k, BigInt& alpha_prime,
                                    Rational& beta_prime, std::size_t bit_budget)
{
    const Rational alpha(params.profile.alpha);
    beta_prime = k.delta_prime * Rational(params.profile.beta) + k.delta;
    alpha_prime = pow_ceil(alpha, k.delta_prime, bit_budget);
    detail::ensure(beta_prime > 1, "closed form needs beta' > 1");
    const BigInt first = alpha_prime * pow_ceil(beta_prime, beta_prime, bit_budget);
    const Rational ratio = beta_prime / (beta_prime - 1);
    const BigInt second = pow_ceil(alpha, k.delta_prime * ratio, bit_budget) *
                          pow_ceil(Rational(params.D), k.delta * ratio, bit_budget);
    return std::max(first, second);
}

/// omega(m) for every m <= limit.
inline std::vector<unsigned char> omega_table(std::uint64_t limit)
{
    std::vector<unsigned char> omega(limit + 1, 0);
    for (std::uint64_t q = 2; q <= limit; ++q)
        if (omega[q] == 0)
            for (std::uint64_t m = q; m <= limit; m += q) ++omega[m];
    return omega;
}

} // namespace detail

/// The smallest certified T with both inequalities holding for every d >= T (g bounded by the
/// profile), maximised with the closed-form comparator.
///
/// For d in [P_k, P_{k+1}) (P_k the k-th primorial) omega(d) <= k, and the right-hand sides are
/// non-decreasing in omega, so d >= R_k := rhs(k)^(1/L) suffices on that interval. The interval
/// loop stops once P_k >= R_k and p_{k+1} dominates rhs(k+1)/rhs(k), which propagates to every
/// later interval. When the resulting bound is small it is refined by a scan with exact omega(d).
inline ThresholdReport threshold_analysis(const BoundParams& params, const Caps& caps = Caps{})
{
    params.validate();
    ThresholdReport out;
    if (params.Delta == 0) return out;

    const ThresholdInequalities ineq(params);
    const std::uint64_t lcm = ineq.lcm();
    const auto& primes = detail::prime_table();

    {
        // the exact loop below only ends once ln P_k catches up with ln R_k
        double ln_primorial = 0.0;
        bool reachable = false;
        for (std::size_t k = 0; k + 1 < primes.size() && !reachable; ++k) {
            reachable = k >= 1 && ln_primorial >= ineq.log_root_rhs(static_cast<unsigned>(k)) * (1.0 - 1e-9);
            ln_primorial += std::log(static_cast<double>(primes[k]));
        }
        if (!reachable)
            throw cap_exceeded("threshold search: omega would exceed the prime table (profile " + params.profile.name +
                               " grows too fast for these exponents)");
    }

    BigInt primorial = 1;  // P_k
    BigInt bound = 1;
    for (unsigned k = 0;; ++k) {
        detail::ensure(k + 1 < primes.size(), "threshold search ran past the prime table");
        const BigInt next_primorial = primorial * primes[k];
        const BigInt rhs = ineq.rhs_power(k);
        check_bits(rhs, caps.bigint_bits, "threshold search");
        const BigInt r_k = root_ceil(rhs, lcm);
        if (r_k > primorial) bound = std::max(bound, std::min(next_primorial, r_k));
        if (r_k <= primorial && k >= 1) {
            // tail: p_{k+1}^L rhs(k) >= rhs(k+1) implies P_{j+1}^L >= rhs(j+1) for all j >= k
            const BigInt next_rhs = ineq.rhs_power(k + 1);
            if (pow_big(BigInt(primes[k]), lcm) * rhs >= next_rhs) {
                out.certified_from_omega = k;
                break;
            }
        }
        primorial = next_primorial;
    }
    out.search_threshold = bound;

    if (bound <= BigInt(caps.exhaustive_threshold_scan)) {
        const auto limit = bound.convert_to<std::uint64_t>();
        const auto omega = detail::omega_table(limit);
        BigInt last = 0;
        for (std::uint64_t m = limit - 1; m >= 1; --m) {
            if (!ineq.hold(BigInt(m), omega[m])) {
                last = m;
                break;
            }
        }
        out.exhaustive = true;
        out.last_violator = last;
        out.search_threshold = last + 1;
    }

    out.closed_form = detail::closed_form_threshold(params, ineq.constants(), out.alpha_prime, out.beta_prime,
                                                    caps.bigint_bits);
    out.value = std::max(out.search_threshold, out.closed_form);
    return out;
}

inline BigInt final_delta(const BoundParams& params, const Caps& caps = Caps{})
{
    return threshold_analysis(params, caps).value;
}

struct BoundReport {
    BoundParams params;
    BigInt x;
    BigInt n;
    BigInt capital_n;
    BigInt sigma_size;
    BigInt f_value;
    IterateChain f_iterates;
    ExponentConstants exponents;
    ThresholdReport threshold;
    bool eps_slack_ok = false;
    double rosser_bound = 0.0;  // x ln x (1 + ln ln x) when 4 <= x fits in 64 bits
};

inline BoundReport bound_report(const BoundParams& params, const Caps& caps = Caps{})
{
    params.validate();
    BoundReport out;
    out.params = params;
    out.x = x_value(params);
    out.n = n_value(params);
    out.capital_n = capital_n(params);
    out.sigma_size = sigma_size(params);
    out.f_value = f_bound(params, caps);
    out.f_iterates = iterate_chain(params, caps);
    out.exponents = exponent_constants(params.Delta, params.c, params.eps);
    out.threshold = threshold_analysis(params, caps);
    out.eps_slack_ok = eps_slack_holds(params);
    if (out.x >= 4) out.rosser_bound = rosser_upper(out.x.convert_to<std::uint64_t>());
    return out;
}

} // namespace arith_mm
