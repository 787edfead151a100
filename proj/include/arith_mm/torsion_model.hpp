#pragma once

// Exactly computable model of torsion points: the group (Z/N)^{2g}, its free direct summands
// (standing in for abelian subvarieties), torsion cosets, and the Lang action by l^c.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arith_mm/caps.hpp"
#include "arith_mm/errors.hpp"
#include "arith_mm/integer_arithmetic.hpp"
#include "arith_mm/number_types.hpp"

namespace arith_mm {

using Point = std::vector<std::uint64_t>;

struct ModelAmbient {
    std::uint64_t N = 1;
    unsigned g = 1;

    bool operator==(const ModelAmbient&) const = default;

    unsigned rank() const { return 2 * g; }

    BigInt order_big() const { return pow_big(BigInt(N), rank()); }

    void validate() const
    {
        detail::require(N >= 1, "ambient: N must be >= 1");
        detail::require(g >= 1 && g <= 8, "ambient: g must be in 1..8");
        detail::require(N < (std::uint64_t{1} << 31), "ambient: N must be < 2^31");
    }

    /// N^{2g}, throwing cap_exceeded above the ambient-order cap.
    std::uint64_t checked_order(const Caps& caps) const
    {
        validate();
        const BigInt order = order_big();
        if (order > BigInt(caps.ambient_order))
            throw cap_exceeded("ambient order " + to_string(order) + " exceeds cap " +
                               std::to_string(caps.ambient_order));
        return order.convert_to<std::uint64_t>();
    }

    void check_point(const Point& a) const
    {
        detail::require(a.size() == rank(), "point has " + std::to_string(a.size()) + " coordinates, expected " +
                                                std::to_string(rank()));
        for (auto v : a) detail::require(v < N, "point coordinate not reduced modulo N");
    }

    Point reduce(const std::vector<std::int64_t>& coords) const
    {
        detail::require(coords.size() == rank(), "point has the wrong number of coordinates");
        Point out(coords.size());
        const auto n = static_cast<std::int64_t>(N);
        for (std::size_t i = 0; i < coords.size(); ++i) out[i] = static_cast<std::uint64_t>(((coords[i] % n) + n) % n);
        return out;
    }

    Point zero() const { return Point(rank(), 0); }

    Point add(const Point& a, const Point& b) const
    {
        Point out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % N;
        return out;
    }

    Point sub(const Point& a, const Point& b) const
    {
        Point out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + N - b[i]) % N;
        return out;
    }

    Point scale(std::uint64_t k, const Point& a) const
    {
        Point out(a.size());
        const auto km = static_cast<unsigned __int128>(k % N);
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = static_cast<std::uint64_t>((km * a[i]) % N);
        return out;
    }

    /// Order of a in the ambient group.
    std::uint64_t point_order(const Point& a) const
    {
        std::uint64_t gg = N;
        for (auto v : a) gg = std::gcd(gg, v);
        return N / gg;
    }

    // Mixed-radix index; index order equals lexicographic order of coordinates.
    std::uint64_t encode(const Point& a) const
    {
        std::uint64_t idx = 0;
        for (auto v : a) idx = idx * N + v;
        return idx;
    }

    /// encode(add(a, b)) without building the sum
    std::uint64_t add_index(const Point& a, const Point& b) const
    {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::uint64_t v = a[i] + b[i];
            if (v >= N) v -= N;
            idx = idx * N + v;
        }
        return idx;
    }

    Point decode(std::uint64_t idx) const
    {
        Point out(rank());
        for (std::size_t i = rank(); i-- > 0;) {
            out[i] = idx % N;
            idx /= N;
        }
        return out;
    }
};

namespace detail {

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t checked_mul_sub(std::int64_t a, std::int64_t q, std::int64_t b)
{
    const __int128 v = static_cast<__int128>(a) - static_cast<__int128>(q) * b;
    ensure(v <= INT64_MAX && v >= INT64_MIN, "Smith normal form: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

/// Smith normal form of an integer matrix, tracking the unimodular column transform.
struct SmithForm {
    std::vector<std::int64_t> divisors;           // non-zero diagonal, in order
    std::vector<std::vector<std::int64_t>> cols;  // n x n column transform V with U A V = D
};

inline SmithForm smith_form(std::vector<std::vector<std::int64_t>> a, std::size_t n)
{
    const std::size_t r = a.size();
    std::vector<std::vector<std::int64_t>> v(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;

    auto swap_cols = [&](std::size_t x, std::size_t y) {
        for (auto& row : a) std::swap(row[x], row[y]);
        for (auto& row : v) std::swap(row[x], row[y]);
    };
    auto col_sub = [&](std::size_t dst, std::size_t src, std::int64_t q) {  // col dst -= q col src
        for (auto& row : a) row[dst] = checked_mul_sub(row[dst], q, row[src]);
        for (auto& row : v) row[dst] = checked_mul_sub(row[dst], q, row[src]);
    };
    auto row_sub = [&](std::size_t dst, std::size_t src, std::int64_t q) {
        for (std::size_t j = 0; j < n; ++j) a[dst][j] = checked_mul_sub(a[dst][j], q, a[src][j]);
    };

    SmithForm out;
    for (std::size_t t = 0; t < std::min(r, n); ++t) {
        for (;;) {
            // smallest non-zero entry of the trailing block to the pivot
            std::size_t bi = r, bj = n;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (a[i][j] != 0 && (bi == r || std::llabs(a[i][j]) < std::llabs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == r) {
                out.cols = std::move(v);
                return out;
            }
            std::swap(a[t], a[bi]);
            if (bj != t) swap_cols(t, bj);

            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                row_sub(i, t, a[i][t] / a[t][t]);
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                col_sub(j, t, a[t][j] / a[t][t]);
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == r) break;
            for (std::size_t j = 0; j < n; ++j) a[t][j] += a[bad][j];  // pull the offending row in
        }
        out.divisors.push_back(std::llabs(a[t][t]));
    }
    out.cols = std::move(v);
    return out;
}

} // namespace detail

/// A free direct summand of (Z/N)^{2g} of rank 2b, the model of a b-dimensional abelian subvariety.
class ModelSubvariety {
public:
    ModelSubvariety() = default;

    static ModelSubvariety make(const ModelAmbient& ambient, std::vector<Point> basis)
    {
        ambient.validate();
        for (const auto& b : basis) ambient.check_point(b);
        detail::require(basis.size() % 2 == 0, "subvariety basis must have an even number (2b) of elements");
        detail::require(basis.size() <= ambient.rank(), "subvariety basis larger than the ambient rank");
        ModelSubvariety out;
        out.ambient_ = ambient;
        out.basis_ = std::move(basis);
        const std::size_t n = ambient.rank();
        std::vector<std::vector<std::int64_t>> m;
        for (const auto& b : out.basis_) m.emplace_back(b.begin(), b.end());
        auto snf = detail::smith_form(std::move(m), n);
        out.divisors_ = snf.divisors;
        detail::require(out.divisors_.size() == out.basis_.size(),
                        "subvariety basis is not independent (rank " + std::to_string(out.divisors_.size()) + ")");
        for (auto dv : out.divisors_)
            detail::require(std::gcd(static_cast<std::uint64_t>(dv), ambient.N) == 1 || ambient.N == 1,
                            "subvariety basis does not span a direct summand (elementary divisor " +
                                std::to_string(dv) + " not a unit mod N)");
        const auto nn = static_cast<std::int64_t>(ambient.N);
        out.transform_.assign(n, std::vector<std::uint64_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.transform_[i][j] = static_cast<std::uint64_t>(detail::mod_floor(snf.cols[i][j], nn));
        return out;
    }

    static ModelSubvariety zero(const ModelAmbient& ambient) { return make(ambient, {}); }

    static ModelSubvariety full(const ModelAmbient& ambient)
    {
        std::vector<Point> basis;
        for (unsigned i = 0; i < ambient.rank(); ++i) {
            Point e = ambient.zero();
            e[i] = 1 % ambient.N;
            basis.push_back(e);
        }
        return make(ambient, basis);
    }

    const ModelAmbient& ambient() const { return ambient_; }
    const std::vector<Point>& basis() const { return basis_; }
    unsigned rank() const { return static_cast<unsigned>(basis_.size()); }
    unsigned dim() const { return rank() / 2; }
    const std::vector<std::int64_t>& elementary_divisors() const { return divisors_; }
    BigInt size() const { return pow_big(BigInt(ambient_.N), rank()); }

    bool contains(const Point& x) const
    {
        const std::size_t n = ambient_.rank();
        for (std::size_t j = rank(); j < n; ++j) {
            unsigned __int128 acc = 0;
            for (std::size_t i = 0; i < n; ++i) acc += static_cast<unsigned __int128>(x[i]) * transform_[i][j];
            if (acc % ambient_.N != 0) return false;
        }
        return true;
    }

    /// All N^{2b} elements, in the order of their coefficient vectors.
    std::vector<Point> elements(const Caps& caps = Caps{}) const
    {
        if (size() > BigInt(caps.ambient_order))
            throw cap_exceeded("subgroup of order " + to_string(size()) + " exceeds enumeration cap");
        const auto count = size().convert_to<std::uint64_t>();
        std::vector<Point> out;
        out.reserve(count);
        std::vector<std::uint64_t> coeff(rank(), 0);
        Point cur = ambient_.zero();
        for (std::uint64_t k = 0; k < count; ++k) {
            out.push_back(cur);
            // odometer step; a wrapping digit still adds its basis vector since N b = 0
            for (std::size_t i = 0; i < coeff.size(); ++i) {
                for (std::size_t j = 0; j < cur.size(); ++j) {
                    cur[j] += basis_[i][j];
                    if (cur[j] >= ambient_.N) cur[j] -= ambient_.N;
                }
                if (++coeff[i] < ambient_.N) break;
                coeff[i] = 0;
            }
        }
        return out;
    }

    /// Same subgroup (as a set).
    bool same_as(const ModelSubvariety& other) const
    {
        if (!(ambient_ == other.ambient_) || rank() != other.rank()) return false;
        for (const auto& b : other.basis_)
            if (!contains(b)) return false;
        return true;
    }

private:
    ModelAmbient ambient_;
    std::vector<Point> basis_;
    std::vector<std::int64_t> divisors_;
    std::vector<std::vector<std::uint64_t>> transform_;
};

/// Minimal m >= 1 with m point in B, scanning the divisors of N in increasing order.
inline std::uint64_t coset_order(const Point& point, const ModelSubvariety& subgroup)
{
    const auto& amb = subgroup.ambient();
    amb.check_point(point);
    std::vector<std::uint64_t> divisors;
    for (std::uint64_t m = 1; m * m <= amb.N; ++m)
        if (amb.N % m == 0) {
            divisors.push_back(m);
            if (m != amb.N / m) divisors.push_back(amb.N / m);
        }
    std::sort(divisors.begin(), divisors.end());
    for (auto m : divisors)
        if (subgroup.contains(amb.scale(m, point))) return m;
    throw invariant_violation("coset_order: N * point not in the subgroup");
}

/// point + subgroup, with its order in the quotient.
struct TorsionCoset {
    Point point;
    ModelSubvariety subgroup;
    std::uint64_t order = 1;

    static TorsionCoset make(Point point, ModelSubvariety subgroup)
    {
        subgroup.ambient().check_point(point);
        TorsionCoset out{std::move(point), std::move(subgroup), 1};
        out.order = coset_order(out.point, out.subgroup);
        return out;
    }

    const ModelAmbient& ambient() const { return subgroup.ambient(); }

    bool same_as(const TorsionCoset& other) const
    {
        return subgroup.same_as(other.subgroup) && subgroup.contains(ambient().sub(point, other.point));
    }
};

inline std::uint64_t coset_order(const TorsionCoset& coset) { return coset_order(coset.point, coset.subgroup); }

namespace detail {

/// Distinct values of l^c mod m over units l mod m, ascending.
inline std::vector<std::uint64_t> lang_multipliers(std::uint64_t m, unsigned c)
{
    std::set<std::uint64_t> out;
    if (m == 1) return {0};
    for (std::uint64_t l = 1; l < m; ++l) {
        if (std::gcd(l, m) != 1) continue;
        unsigned __int128 v = 1;
        for (unsigned i = 0; i < c; ++i) v = (v * l) % m;
        out.insert(static_cast<std::uint64_t>(v));
    }
    return {out.begin(), out.end()};
}

} // namespace detail

/// { l^c a : l in (Z/d)^x }, d = ord(a), sorted.
inline std::vector<Point> lang_orbit(const ModelAmbient& ambient, const Point& a, unsigned c)
{
    ambient.validate();
    ambient.check_point(a);
    detail::require(c >= 1, "lang_orbit: c must be >= 1");
    const std::uint64_t d = ambient.point_order(a);
    std::set<Point> out;
    for (auto k : detail::lang_multipliers(d, c)) out.insert(ambient.scale(k, a));
    return {out.begin(), out.end()};
}

/// q point + B, for q prime to N.
inline TorsionCoset multiply_coset(std::uint64_t q, const TorsionCoset& coset)
{
    detail::require(q >= 1, "multiply_coset: q must be >= 1");
    detail::require(std::gcd(q, coset.ambient().N) == 1, "multiply_coset: gcd(q, N) != 1");
    return TorsionCoset::make(coset.ambient().scale(q, coset.point), coset.subgroup);
}

struct TorsionCount {
    BigInt closed_form;
    std::optional<BigInt> enumerated;
};

/// #B[q] = gcd(q, N)^{2 dim B}; also counted directly when B is within the enumeration cap.
inline TorsionCount torsion_count(const ModelSubvariety& subgroup, std::uint64_t q, const Caps& caps = Caps{})
{
    detail::require(q >= 1, "torsion_count: q must be >= 1");
    const auto& amb = subgroup.ambient();
    TorsionCount out;
    out.closed_form = pow_big(BigInt(std::gcd(q, amb.N)), subgroup.rank());
    if (subgroup.size() <= BigInt(caps.ambient_order)) {
        std::uint64_t count = 0;
        for (const auto& x : subgroup.elements(caps))
            if (amb.point_order(x) != 0 && q % amb.point_order(x) == 0) ++count;
        out.enumerated = BigInt(count);
        detail::ensure(*out.enumerated == out.closed_form, "torsion_count: enumeration disagrees with gcd formula");
    }
    return out;
}

/// q^{2 dim V} deg V / #B[q].
inline BigInt degree_pushforward(const BigInt& degree, unsigned dim, const BigInt& stab_torsion, std::uint64_t q)
{
    detail::require(degree >= 1 && stab_torsion >= 1 && q >= 1, "degree_pushforward: inputs must be positive");
    const BigInt num = pow_big(BigInt(q), 2ull * dim) * degree;
    detail::require(num % stab_torsion == 0, "degree_pushforward: inconsistent inputs (#B[q] does not divide)");
    return num / stab_torsion;
}

struct CorhinValues {
    BigInt torsion_q;
    BigInt torsion_q_prime;
    BigInt torsion_product;
};

/// The torsion counts forced by [q](V) = [q'](V) for coprime q, q'.
inline CorhinValues corhin_derive(const BigInt& degree, unsigned dim, std::uint64_t q, std::uint64_t q_prime)
{
    detail::require(degree >= 1 && q >= 1 && q_prime >= 1, "corhin_derive: inputs must be positive");
    detail::require(std::gcd(q, q_prime) == 1, "corhin_derive: q and q' must be coprime");
    const std::uint64_t e = 2ull * dim;
    return {pow_big(BigInt(q), e), pow_big(BigInt(q_prime), e), pow_big(BigInt(q) * q_prime, e)};
}

struct HindryComponent {
    TorsionCoset coset;
    BigInt stabilizer_size;  // #{x : x + C = C}, counted over the ambient group
    bool special = true;
};

struct HindryReport {
    bool vacuous = false;
    bool hypothesis_holds = false;  // [q](V) = [q'](V) as point sets
    std::uint64_t degree = 0;       // number of distinct components
    bool degree_condition = false;  // deg(V) < (q q')^2
    std::vector<HindryComponent> components;
};

/// Checks the hypotheses of the specialness criterion on a union of cosets.
inline HindryReport hindry_criterion(const std::vector<TorsionCoset>& cosets, std::uint64_t q, std::uint64_t q_prime,
                                     const Caps& caps = Caps{})
{
    HindryReport out;
    if (cosets.empty()) {
        out.vacuous = true;
        out.hypothesis_holds = true;
        out.degree_condition = true;
        return out;
    }
    const ModelAmbient amb = cosets.front().ambient();
    for (const auto& c : cosets) detail::require(c.ambient() == amb, "hindry_criterion: mixed ambients");
    detail::require(q >= 1 && q_prime >= 1, "hindry_criterion: q, q' must be positive");
    detail::require(std::gcd(q * q_prime, amb.N) == 1, "hindry_criterion: gcd(q q', N) != 1");
    const std::uint64_t order = amb.checked_order(caps);

    std::vector<TorsionCoset> distinct;
    for (const auto& c : cosets) {
        bool seen = false;
        for (const auto& d : distinct) seen = seen || d.same_as(c);
        if (!seen) distinct.push_back(c);
    }
    out.degree = distinct.size();
    const BigInt qq = BigInt(q) * q_prime;
    out.degree_condition = BigInt(out.degree) < qq * qq;

    std::set<Point> image_q, image_q_prime;
    for (const auto& c : distinct)
        for (const auto& b : c.subgroup.elements(caps)) {
            const Point x = amb.add(c.point, b);
            image_q.insert(amb.scale(q, x));
            image_q_prime.insert(amb.scale(q_prime, x));
        }
    out.hypothesis_holds = image_q == image_q_prime;

    for (const auto& c : distinct) {
        std::uint64_t stab = 0;
        for (std::uint64_t idx = 0; idx < order; ++idx) {
            const Point x = amb.decode(idx);
            if (c.subgroup.contains(amb.sub(amb.add(x, c.point), c.point))) ++stab;
        }
        detail::ensure(BigInt(stab) == c.subgroup.size(), "hindry_criterion: stabilizer differs from the summand");
        out.components.push_back({c, BigInt(stab), true});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Catalogue of free direct summands
// ---------------------------------------------------------------------------

namespace detail {

/// Canonical bases of all free rank-r summands of (Z/p^e)^n: rows with a unit pivot (value 1)
/// in pivot column J[i], zeros in the other pivot columns, and entries left of the row's pivot
/// divisible by p.
inline std::vector<std::vector<std::vector<std::uint64_t>>> prime_power_summands(std::uint64_t p, unsigned e,
                                                                                 unsigned n, unsigned r)
{
    std::uint64_t q = 1;
    for (unsigned i = 0; i < e; ++i) q *= p;
    std::vector<std::vector<std::vector<std::uint64_t>>> out;
    std::vector<unsigned> pivots(r);
    std::iota(pivots.begin(), pivots.end(), 0u);
    for (;;) {
        struct Slot {
            unsigned row, col;
            std::uint64_t step, count;
        };
        std::vector<Slot> slots;
        std::vector<bool> is_pivot(n, false);
        for (auto j : pivots) is_pivot[j] = true;
        for (unsigned i = 0; i < r; ++i)
            for (unsigned k = 0; k < n; ++k) {
                if (is_pivot[k]) continue;
                if (k < pivots[i])
                    slots.push_back({i, k, p, q / p});
                else
                    slots.push_back({i, k, 1, q});
            }
        std::vector<std::uint64_t> digit(slots.size(), 0);
        for (;;) {
            std::vector<std::vector<std::uint64_t>> m(r, std::vector<std::uint64_t>(n, 0));
            for (unsigned i = 0; i < r; ++i) m[i][pivots[i]] = 1 % q;
            for (std::size_t s = 0; s < slots.size(); ++s) m[slots[s].row][slots[s].col] = digit[s] * slots[s].step;
            out.push_back(std::move(m));
            std::size_t s = 0;
            for (; s < slots.size(); ++s) {
                if (++digit[s] < slots[s].count) break;
                digit[s] = 0;
            }
            if (s == slots.size()) break;
        }
        // next pivot combination
        int i = static_cast<int>(r) - 1;
        while (i >= 0 && pivots[i] == n - r + static_cast<unsigned>(i)) --i;
        if (i < 0) break;
        ++pivots[i];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < r; ++j) pivots[j] = pivots[j - 1] + 1;
    }
    return out;
}

} // namespace detail

/// Every free direct summand of even rank, sorted by rank and then by canonical basis.
inline std::vector<ModelSubvariety> summand_catalog(const ModelAmbient& ambient, const Caps& caps = Caps{})
{
    ambient.checked_order(caps);
    const unsigned n = ambient.rank();
    const auto fact = factorize(ambient.N);
    std::vector<ModelSubvariety> out;
    for (unsigned r = 0; r <= n; r += 2) {
        // CRT-combine per-prime-power canonical forms
        std::vector<std::vector<std::vector<std::uint64_t>>> combined{
            std::vector<std::vector<std::uint64_t>>(r, std::vector<std::uint64_t>(n, 0))};
        std::uint64_t modulus = 1;
        for (const auto& [p, e] : fact.factors) {
            std::uint64_t q = 1;
            for (unsigned i = 0; i < e; ++i) q *= p;
            const auto local = detail::prime_power_summands(p, e, n, r);
            std::vector<std::vector<std::vector<std::uint64_t>>> next;
            next.reserve(combined.size() * local.size());
            // x = a (mod modulus), x = b (mod q)
            const std::uint64_t inv = [&] {
                for (std::uint64_t t = 0; t < q; ++t)
                    if ((modulus % q) * t % q == 1 % q) return t;
                return std::uint64_t{0};
            }();
            for (const auto& a : combined)
                for (const auto& b : local) {
                    auto m = a;
                    for (unsigned i = 0; i < r; ++i)
                        for (unsigned j = 0; j < n; ++j) {
                            const std::uint64_t diff = (b[i][j] + q - a[i][j] % q) % q;
                            m[i][j] = a[i][j] + modulus * ((diff * inv) % q);
                        }
                    next.push_back(std::move(m));
                }
            combined = std::move(next);
            modulus *= q;
        }
        std::sort(combined.begin(), combined.end());
        for (auto& m : combined) {
            std::vector<Point> basis(m.begin(), m.end());
            out.push_back(ModelSubvariety::make(ambient, std::move(basis)));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Special closure and the key-proposition witness
// ---------------------------------------------------------------------------

/// A Lang-stable union of torsion cosets, L alpha + B.
struct LangCoset {
    Point alpha;
    ModelSubvariety subgroup;
    std::uint64_t order = 1;  // ord(alpha + B)
    unsigned c = 1;

    std::vector<Point> points(const Caps& caps = Caps{}) const
    {
        const auto& amb = subgroup.ambient();
        std::set<Point> out;
        const auto elems = subgroup.elements(caps);
        for (const auto& x : lang_orbit(amb, alpha, c))
            for (const auto& b : elems) out.insert(amb.add(x, b));
        return {out.begin(), out.end()};
    }
};

namespace detail {

/// Element of `pts` of least ambient order, lexicographically least among those.
inline Point least_order_representative(const ModelAmbient& amb, const std::vector<Point>& pts)
{
    ensure(!pts.empty(), "least_order_representative: empty set");
    const Point* best = &pts.front();
    for (const auto& x : pts) {
        const auto ox = amb.point_order(x);
        const auto ob = amb.point_order(*best);
        if (ox < ob || (ox == ob && x < *best)) best = &x;
    }
    return *best;
}

class Bitset {
public:
    explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    bool subset_of(const Bitset& o) const
    {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }
    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    bool operator==(const Bitset&) const = default;

private:
    std::vector<std::uint64_t> words_;
};

} // namespace detail

struct ClosureResult {
    std::vector<LangCoset> components;
    std::vector<Point> points;  // the union, sorted
};

/// Smallest Lang-stable union of torsion cosets containing S (by point count, then fewest
/// components, then lexicographically least list of (catalogue index, representative)).
/// Components are maximal Lang-stable cosets inside the union.
inline ClosureResult special_closure(const ModelAmbient& ambient, const std::vector<Point>& S, unsigned c,
                                     const std::vector<ModelSubvariety>& catalog, const Caps& caps = Caps{},
                                     std::uint64_t node_budget = 2000000)
{
    const std::uint64_t order = ambient.checked_order(caps);
    detail::require(c >= 1, "special_closure: c must be >= 1");
    for (const auto& s : S) ambient.check_point(s);

    // every Lang-stable set containing S contains L S, and L S is itself such a union
    std::set<Point> closure_set;
    for (const auto& s : S)
        for (auto& x : lang_orbit(ambient, s, c)) closure_set.insert(std::move(x));
    ClosureResult out;
    out.points.assign(closure_set.begin(), closure_set.end());
    if (out.points.empty()) return out;

    const std::size_t t_size = out.points.size();
    std::vector<std::int64_t> local(order, -1);  // ambient index -> index in T
    for (std::size_t i = 0; i < t_size; ++i) local[ambient.encode(out.points[i])] = static_cast<std::int64_t>(i);
    const auto multipliers = detail::lang_multipliers(ambient.N, c);

    struct Candidate {
        std::size_t catalog_index;
        Point alpha;
        detail::Bitset members;
        std::size_t size;
    };
    std::vector<Candidate> maximal;
    std::vector<std::vector<std::size_t>> by_point(t_size);  // maximal candidates containing each point

    std::vector<std::size_t> order_idx(catalog.size());
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::stable_sort(order_idx.begin(), order_idx.end(),
                     [&](std::size_t x, std::size_t y) { return catalog[x].rank() > catalog[y].rank(); });

    std::vector<char> alive(t_size, 1);
    for (auto ci : order_idx) {
        const auto& sub = catalog[ci];
        if (sub.size() > BigInt(t_size)) continue;
        // largest B-stable subset of T: repeatedly drop t with some t + basis vector outside
        std::vector<std::size_t> survivors(t_size);
        std::iota(survivors.begin(), survivors.end(), 0);
        std::fill(alive.begin(), alive.end(), 1);
        for (bool changed = true; changed && !survivors.empty();) {
            changed = false;
            std::size_t keep = 0;
            for (auto ti : survivors) {
                bool ok = true;
                for (const auto& bv : sub.basis()) {
                    const auto li = local[ambient.add_index(out.points[ti], bv)];
                    if (li < 0 || !alive[static_cast<std::size_t>(li)]) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    survivors[keep++] = ti;
                else {
                    alive[ti] = 0;
                    changed = true;
                }
            }
            survivors.resize(keep);
        }
        if (survivors.empty()) continue;
        const auto elems = sub.elements(caps);
        std::vector<std::int64_t> coset_of(t_size, -1);
        std::vector<std::vector<std::size_t>> cosets;  // members (T-local) of cosets inside T
        for (auto ti : survivors) {
            if (coset_of[ti] >= 0) continue;
            std::vector<std::size_t> members;
            for (const auto& e : elems) {
                const auto li = local[ambient.add_index(out.points[ti], e)];
                detail::ensure(li >= 0 && alive[static_cast<std::size_t>(li)], "special_closure: stable set not a union of cosets");
                members.push_back(static_cast<std::size_t>(li));
                coset_of[static_cast<std::size_t>(li)] = static_cast<std::int64_t>(cosets.size());
            }
            cosets.push_back(std::move(members));
        }
        std::vector<bool> grouped(cosets.size(), false);
        for (std::size_t k = 0; k < cosets.size(); ++k) {
            if (grouped[k]) continue;
            const Point& rep = out.points[cosets[k].front()];
            detail::Bitset members(t_size);
            std::vector<Point> pts;
            for (auto mult : multipliers) {
                const auto li = local[ambient.encode(ambient.scale(mult, rep))];
                detail::ensure(li >= 0 && coset_of[li] >= 0, "special_closure: closure not Lang-stable");
                const auto cid = static_cast<std::size_t>(coset_of[li]);
                if (grouped[cid]) continue;
                grouped[cid] = true;
                for (auto m : cosets[cid]) {
                    members.set(m);
                    pts.push_back(out.points[m]);
                }
            }
            bool dominated = false;
            const std::size_t first = cosets[k].front();
            for (auto mi : by_point[first])
                if (members.subset_of(maximal[mi].members)) {
                    dominated = true;
                    break;
                }
            if (dominated) continue;
            const std::size_t id = maximal.size();
            for (std::size_t ti = 0; ti < t_size; ++ti)
                if (members.test(ti)) by_point[ti].push_back(id);
            maximal.push_back({ci, detail::least_order_representative(ambient, pts), std::move(members), pts.size()});
        }
    }

    // exact minimum cover of T by maximal candidates
    using Key = std::pair<std::size_t, Point>;
    auto key_of = [&](std::size_t id) { return Key{maximal[id].catalog_index, maximal[id].alpha}; };
    std::vector<std::size_t> best, current;
    std::vector<Key> best_keys;
    bool have_best = false;
    std::vector<int> cover_count(t_size, 0);
    std::size_t uncovered = t_size;
    std::size_t largest = 1;
    for (const auto& m : maximal) largest = std::max(largest, m.size);
    std::uint64_t nodes = 0;

    auto sorted_keys = [&](const std::vector<std::size_t>& ids) {
        std::vector<Key> keys;
        for (auto id : ids) keys.push_back(key_of(id));
        std::sort(keys.begin(), keys.end());
        return keys;
    };

    std::function<void()> search = [&]() {
        if (++nodes > node_budget) throw cap_exceeded("special_closure: cover search exceeded node budget");
        if (uncovered == 0) {
            auto keys = sorted_keys(current);
            if (!have_best || current.size() < best.size() || (current.size() == best.size() && keys < best_keys)) {
                best = current;
                best_keys = std::move(keys);
                have_best = true;
            }
            return;
        }
        const std::size_t lower = current.size() + (uncovered + largest - 1) / largest;
        if (have_best && lower > best.size()) return;
        std::size_t pick = t_size;
        for (std::size_t ti = 0; ti < t_size; ++ti)
            if (cover_count[ti] == 0 && (pick == t_size || by_point[ti].size() < by_point[pick].size())) pick = ti;
        std::vector<std::size_t> options = by_point[pick];
        std::sort(options.begin(), options.end(), [&](std::size_t x, std::size_t y) { return key_of(x) < key_of(y); });
        for (auto id : options) {
            current.push_back(id);
            for (std::size_t ti = 0; ti < t_size; ++ti)
                if (maximal[id].members.test(ti) && cover_count[ti]++ == 0) --uncovered;
            search();
            for (std::size_t ti = 0; ti < t_size; ++ti)
                if (maximal[id].members.test(ti) && --cover_count[ti] == 0) ++uncovered;
            current.pop_back();
        }
    };
    search();
    detail::ensure(have_best, "special_closure: no cover found");

    std::sort(best.begin(), best.end(), [&](std::size_t x, std::size_t y) { return key_of(x) < key_of(y); });
    for (auto id : best) {
        const auto& m = maximal[id];
        out.components.push_back({m.alpha, catalog[m.catalog_index], coset_order(m.alpha, catalog[m.catalog_index]), c});
    }
    return out;
}

inline ClosureResult special_closure(const ModelAmbient& ambient, const std::vector<Point>& S, unsigned c,
                                     const Caps& caps = Caps{})
{
    return special_closure(ambient, S, c, summand_catalog(ambient, caps), caps);
}

struct KeypropWitness {
    LangCoset component;  // L alpha + B with L a inside it and it inside V
    bool within_delta = false;
};

/// (alpha, B) with L a in L alpha + B in V and ord(alpha + B) minimal; ties go to the larger B,
/// then to the earlier catalogue entry. alpha is the least-order, then
/// lexicographically least, element of a + B.
inline std::optional<KeypropWitness> keyprop_witness(const ModelAmbient& ambient, const std::vector<Point>& V,
                                                     const Point& a, unsigned c, const BigInt& delta_cap,
                                                     const std::vector<ModelSubvariety>& catalog,
                                                     const Caps& caps = Caps{})
{
    const std::uint64_t order = ambient.checked_order(caps);
    ambient.check_point(a);
    detail::require(c >= 1, "keyprop_witness: c must be >= 1");
    std::vector<bool> in_v(order, false);
    for (const auto& v : V) {
        ambient.check_point(v);
        in_v[ambient.encode(v)] = true;
    }
    const auto orbit = lang_orbit(ambient, a, c);
    for (const auto& x : orbit)
        if (!in_v[ambient.encode(x)]) throw validation_error("keyprop_witness: L a is not contained in V");

    std::optional<std::size_t> best;
    std::uint64_t best_order = 0;
    for (std::size_t ci = 0; ci < catalog.size(); ++ci) {
        const auto& sub = catalog[ci];
        if (sub.size() > BigInt(V.size())) continue;
        const auto ord = coset_order(a, sub);
        if (best && (ord > best_order || (ord == best_order && sub.rank() <= catalog[*best].rank()))) continue;
        bool inside = true;
        for (const auto& x : orbit)
            for (const auto& b : sub.basis()) inside = inside && in_v[ambient.add_index(x, b)];
        if (!inside) continue;
        for (const auto& b : sub.elements(caps)) {
            for (const auto& x : orbit)
                if (!in_v[ambient.add_index(x, b)]) {
                    inside = false;
                    break;
                }
            if (!inside) break;
        }
        if (!inside) continue;
        best = ci;
        best_order = ord;
    }
    if (!best) return std::nullopt;
    const auto& sub = catalog[*best];
    std::vector<Point> coset;
    for (const auto& b : sub.elements(caps)) coset.push_back(ambient.add(a, b));
    KeypropWitness out{{detail::least_order_representative(ambient, coset), sub, best_order, c}, false};
    out.within_delta = BigInt(best_order) <= delta_cap;
    return out;
}

inline std::optional<KeypropWitness> keyprop_witness(const ModelAmbient& ambient, const std::vector<Point>& V,
                                                     const Point& a, unsigned c, const BigInt& delta_cap,
                                                     const Caps& caps = Caps{})
{
    return keyprop_witness(ambient, V, a, c, delta_cap, summand_catalog(ambient, caps), caps);
}

} // namespace arith_mm
