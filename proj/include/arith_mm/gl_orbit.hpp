#pragma once

// Matrix groups over F_ell, orbit densities in subspaces, the extremal subspace W and the
// stabilizer-index bound [G : Stab(W)] <= 3 C^{4^{dim V}}.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arith_mm/caps.hpp"
#include "arith_mm/errors.hpp"
#include "arith_mm/integer_arithmetic.hpp"
#include "arith_mm/number_types.hpp"

namespace arith_mm {

using FVector = std::vector<std::uint32_t>;
using FMatrix = std::vector<std::uint32_t>;  // row-major dim x dim

/// F_ell^dim with vectors indexed in mixed radix (first coordinate most significant).
struct FiniteSpace {
    std::uint32_t ell = 2;
    unsigned dim = 1;

    std::uint32_t size() const
    {
        std::uint32_t s = 1;
        for (unsigned i = 0; i < dim; ++i) s *= ell;
        return s;
    }

    std::uint32_t encode(const FVector& v) const
    {
        std::uint32_t idx = 0;
        for (auto x : v) idx = idx * ell + x;
        return idx;
    }

    FVector decode(std::uint32_t idx) const
    {
        FVector v(dim);
        for (unsigned i = dim; i-- > 0;) {
            v[i] = idx % ell;
            idx /= ell;
        }
        return v;
    }

    FVector apply(const FMatrix& m, const FVector& v) const
    {
        FVector out(dim, 0);
        for (unsigned i = 0; i < dim; ++i) {
            std::uint64_t acc = 0;
            for (unsigned j = 0; j < dim; ++j) acc += static_cast<std::uint64_t>(m[i * dim + j]) * v[j];
            out[i] = static_cast<std::uint32_t>(acc % ell);
        }
        return out;
    }

    FMatrix multiply(const FMatrix& a, const FMatrix& b) const
    {
        FMatrix out(dim * dim, 0);
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned k = 0; k < dim; ++k) {
                const std::uint64_t aik = a[i * dim + k];
                if (aik == 0) continue;
                for (unsigned j = 0; j < dim; ++j)
                    out[i * dim + j] = static_cast<std::uint32_t>((out[i * dim + j] + aik * b[k * dim + j]) % ell);
            }
        return out;
    }

    FMatrix identity() const
    {
        FMatrix out(dim * dim, 0);
        for (unsigned i = 0; i < dim; ++i) out[i * dim + i] = 1 % ell;
        return out;
    }

    std::uint32_t inverse(std::uint32_t x) const
    {
        // ell is prime: x^(ell-2)
        std::uint64_t r = 1, b = x % ell;
        for (std::uint32_t e = ell - 2; e; e >>= 1) {
            if (e & 1) r = r * b % ell;
            b = b * b % ell;
        }
        return static_cast<std::uint32_t>(r);
    }

    /// Reduced row echelon form of the given rows, zero rows dropped.
    std::vector<FVector> rref(std::vector<FVector> rows) const
    {
        std::size_t r = 0;
        for (unsigned col = 0; col < dim && r < rows.size(); ++col) {
            std::size_t piv = r;
            while (piv < rows.size() && rows[piv][col] == 0) ++piv;
            if (piv == rows.size()) continue;
            std::swap(rows[r], rows[piv]);
            const std::uint64_t inv = inverse(rows[r][col]);
            for (auto& x : rows[r]) x = static_cast<std::uint32_t>(x * inv % ell);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == r || rows[i][col] == 0) continue;
                const std::uint64_t f = rows[i][col];
                for (unsigned j = 0; j < dim; ++j)
                    rows[i][j] = static_cast<std::uint32_t>((rows[i][j] + (ell - f) * rows[r][j]) % ell);
            }
            ++r;
        }
        rows.resize(r);
        return rows;
    }

    bool invertible(const FMatrix& m) const
    {
        std::vector<FVector> rows;
        for (unsigned i = 0; i < dim; ++i) rows.emplace_back(m.begin() + i * dim, m.begin() + (i + 1) * dim);
        return rref(std::move(rows)).size() == dim;
    }
};

/// A subspace given by its reduced row echelon basis, with a membership table.
struct Subspace {
    std::vector<FVector> basis;
    std::vector<std::uint8_t> members;  // indexed by FiniteSpace::encode

    unsigned dim() const { return static_cast<unsigned>(basis.size()); }
    bool contains(std::uint32_t idx) const { return members[idx] != 0; }

    bool subset_of(const Subspace& other) const
    {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i] && !other.members[i]) return false;
        return true;
    }

    bool operator==(const Subspace& o) const { return basis == o.basis; }

    /// dimension first, then reduced basis
    bool operator<(const Subspace& o) const
    {
        if (dim() != o.dim()) return dim() < o.dim();
        return basis < o.basis;
    }
};

inline Subspace span(const FiniteSpace& space, const std::vector<FVector>& vectors)
{
    for (const auto& v : vectors) {
        detail::require(v.size() == space.dim, "vector has the wrong dimension");
        for (auto x : v) detail::require(x < space.ell, "vector entry not reduced modulo ell");
    }
    Subspace out;
    out.basis = space.rref(vectors);
    out.members.assign(space.size(), 0);
    const std::uint32_t count = [&] {
        std::uint32_t c = 1;
        for (std::size_t i = 0; i < out.basis.size(); ++i) c *= space.ell;
        return c;
    }();
    std::vector<std::uint32_t> coeff(out.basis.size(), 0);
    for (std::uint32_t k = 0; k < count; ++k) {
        FVector v(space.dim, 0);
        for (std::size_t i = 0; i < coeff.size(); ++i)
            for (unsigned j = 0; j < space.dim; ++j) v[j] = (v[j] + coeff[i] * out.basis[i][j]) % space.ell;
        out.members[space.encode(v)] = 1;
        for (std::size_t i = 0; i < coeff.size(); ++i) {
            if (++coeff[i] < space.ell) break;
            coeff[i] = 0;
        }
    }
    return out;
}

/// Every subspace of F_ell^dim, sorted by dimension then by reduced basis.
inline std::vector<Subspace> enumerate_subspaces(const FiniteSpace& space, const Caps& caps = Caps{})
{
    if (space.size() > caps.lattice_points)
        throw cap_exceeded("subspace lattice: ell^dim = " + std::to_string(space.size()) + " exceeds cap " +
                           std::to_string(caps.lattice_points));
    std::vector<Subspace> out;
    const unsigned n = space.dim;
    for (unsigned k = 0; k <= n; ++k) {
        std::vector<unsigned> piv(k);
        for (unsigned i = 0; i < k; ++i) piv[i] = i;
        for (;;) {
            // free slots: row i, non-pivot column right of its pivot
            std::vector<std::pair<unsigned, unsigned>> slots;
            for (unsigned i = 0; i < k; ++i)
                for (unsigned c = piv[i] + 1; c < n; ++c)
                    if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(i, c);
            std::vector<std::uint32_t> digit(slots.size(), 0);
            for (;;) {
                std::vector<FVector> rows(k, FVector(n, 0));
                for (unsigned i = 0; i < k; ++i) rows[i][piv[i]] = 1;
                for (std::size_t s = 0; s < slots.size(); ++s) rows[slots[s].first][slots[s].second] = digit[s];
                out.push_back(span(space, rows));
                std::size_t s = 0;
                for (; s < slots.size(); ++s) {
                    if (++digit[s] < space.ell) break;
                    digit[s] = 0;
                }
                if (s == slots.size()) break;
            }
            int i = static_cast<int>(k) - 1;
            while (i >= 0 && piv[i] == n - k + static_cast<unsigned>(i)) --i;
            if (i < 0) break;
            ++piv[i];
            for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct MatrixGroup {
    FiniteSpace space;
    std::vector<FMatrix> generators;
    std::vector<FMatrix> elements;  // breadth-first order from the identity

    std::size_t order() const { return elements.size(); }
};

inline FMatrix reduce_matrix(const FiniteSpace& space, const std::vector<std::vector<std::int64_t>>& rows)
{
    detail::require(rows.size() == space.dim, "matrix must have dim rows");
    FMatrix m;
    const auto l = static_cast<std::int64_t>(space.ell);
    for (const auto& row : rows) {
        detail::require(row.size() == space.dim, "matrix must have dim columns");
        for (auto x : row) m.push_back(static_cast<std::uint32_t>(((x % l) + l) % l));
    }
    return m;
}

inline MatrixGroup generate_group(const std::vector<FMatrix>& gens, std::uint32_t ell, unsigned dim,
                                  std::size_t cap)
{
    detail::require(ell >= 2 && is_prime(ell), "ell must be prime");
    detail::require(dim >= 1 && dim <= 8, "dim must be in 1..8");
    MatrixGroup g;
    g.space = {ell, dim};
    for (const auto& m : gens) {
        detail::require(m.size() == dim * dim, "generator has the wrong shape");
        for (auto x : m) detail::require(x < ell, "generator entry not reduced modulo ell");
        detail::require(g.space.invertible(m), "singular generator");
    }
    g.generators = gens;
    std::map<FMatrix, std::size_t> seen;
    g.elements.push_back(g.space.identity());
    seen.emplace(g.elements.front(), 0);
    for (std::size_t head = 0; head < g.elements.size(); ++head)
        for (const auto& s : gens) {
            FMatrix h = g.space.multiply(s, g.elements[head]);
            if (seen.count(h)) continue;
            if (g.elements.size() >= cap)
                throw cap_exceeded("matrix group exceeds size cap " + std::to_string(cap));
            seen.emplace(h, g.elements.size());
            g.elements.push_back(std::move(h));
        }
    return g;
}

inline std::vector<FVector> orbit(const MatrixGroup& G, const FVector& a)
{
    span(G.space, {a});  // validates a
    std::vector<std::uint8_t> hit(G.space.size(), 0);
    for (const auto& g : G.elements) hit[G.space.encode(G.space.apply(g, a))] = 1;
    std::vector<FVector> out;
    for (std::uint32_t i = 0; i < hit.size(); ++i)
        if (hit[i]) out.push_back(G.space.decode(i));
    return out;
}

inline Rational epsilon(const MatrixGroup& G, const FVector& a, const Subspace& W)
{
    const auto orb = orbit(G, a);
    std::size_t inside = 0;
    for (const auto& v : orb) inside += W.contains(G.space.encode(v));
    return Rational(static_cast<long>(inside), static_cast<long>(orb.size()));
}

struct OrbitWitness {
    std::size_t g = 0;            // index into the group's element list
    std::vector<std::size_t> H;   // Stab_G(W), as element indices
};

struct OrbitDensityReport {
    std::vector<FVector> orbit;
    Subspace V;
    Rational C;
    Subspace W;
    Rational epsilon_V;
    Rational epsilon_W;
    std::size_t group_order = 0;
    std::size_t stab_index = 0;
    Rational bound;  // 3 C^{4^{dim V}}
    bool bound_satisfied = false;
    bool optimality_holds = false;    // eps(W') < eps(W)^4 for all proper W' < W
    bool intersection_holds = false;  // #(gS cap g'S) < eps(W)^4 #(G a) across distinct cosets
    bool generated_by_orbit = false;  // G a cap W spans W
    std::optional<OrbitWitness> corollary_witness;
};

/// Precomputed action tables and subspace lattice for one group, shared across (a, V) queries.
class OrbitAnalyzer {
public:
    OrbitAnalyzer(const MatrixGroup& G, const Caps& caps = Caps{})
        : G_(G), lattice_(enumerate_subspaces(G.space, caps))
    {
        const auto n = G.space.size();
        action_.resize(G.order() * n);
        for (std::size_t gi = 0; gi < G.order(); ++gi)
            for (std::uint32_t v = 0; v < n; ++v)
                action_[gi * n + v] = G.space.encode(G.space.apply(G.elements[gi], G.space.decode(v)));
        stab_.resize(lattice_.size());
        translates_.resize(lattice_.size());
    }

    const MatrixGroup& group() const { return G_; }
    const std::vector<Subspace>& lattice() const { return lattice_; }

    std::size_t lattice_index(const Subspace& W) const
    {
        const auto it = std::lower_bound(lattice_.begin(), lattice_.end(), W);
        detail::ensure(it != lattice_.end() && *it == W, "subspace missing from lattice");
        return static_cast<std::size_t>(it - lattice_.begin());
    }

    std::uint32_t act(std::size_t g, std::uint32_t v) const { return action_[g * G_.space.size() + v]; }

    std::vector<std::uint8_t> orbit_members(std::uint32_t a) const
    {
        std::vector<std::uint8_t> hit(G_.space.size(), 0);
        for (std::size_t g = 0; g < G_.order(); ++g) hit[act(g, a)] = 1;
        return hit;
    }

    /// Indices of g with g W = W.
    const std::vector<std::size_t>& stabilizer(std::size_t w) const
    {
        if (!stab_[w]) {
            std::vector<std::size_t> s;
            const auto& W = lattice_[w];
            std::vector<std::uint32_t> basis_idx;
            for (const auto& b : W.basis) basis_idx.push_back(G_.space.encode(b));
            for (std::size_t g = 0; g < G_.order(); ++g) {
                bool ok = true;
                for (auto b : basis_idx) ok = ok && W.contains(act(g, b));
                if (ok) s.push_back(g);
            }
            stab_[w] = std::move(s);
        }
        return *stab_[w];
    }

    static std::size_t count_in(const std::vector<std::uint8_t>& orb, const Subspace& W)
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < orb.size(); ++i) c += (orb[i] && W.members[i]);
        return c;
    }

    /// Index into the lattice of the extremal W inside V.
    std::size_t extremal(const std::vector<std::uint8_t>& orb, std::size_t orbit_size, const Subspace& V) const
    {
        const BigInt o(orbit_size);
        std::optional<std::size_t> best;
        std::size_t best_count = 0;
        for (std::size_t w = 0; w < lattice_.size(); ++w) {
            const auto& W = lattice_[w];
            if (W.dim() > V.dim() || !W.subset_of(V)) continue;
            const std::size_t cnt = count_in(orb, W);
            if (cnt == 0) continue;
            if (!best) {
                best = w;
                best_count = cnt;
                continue;
            }
            // eps^{4^{k - n}} compared after raising both sides to 4^n
            const unsigned k1 = W.dim(), k2 = lattice_[*best].dim();
            const BigInt lhs = pow_big(BigInt(cnt), 1ull << (2 * k1)) * pow_big(o, 1ull << (2 * k2));
            const BigInt rhs = pow_big(BigInt(best_count), 1ull << (2 * k2)) * pow_big(o, 1ull << (2 * k1));
            // the lattice is sorted by (dim, basis): strictly larger wins, ties keep the earlier
            if (lhs > rhs) {
                best = w;
                best_count = cnt;
            }
        }
        detail::require(best.has_value(), "extremal_subspace: orbit misses V (empty density)");
        return *best;
    }

    OrbitDensityReport verify(const FVector& a, const Subspace& V, std::optional<Rational> C = std::nullopt) const
    {
        const auto& sp = G_.space;
        span(sp, {a});
        const std::uint32_t ai = sp.encode(a);
        const auto orb = orbit_members(ai);
        std::size_t osize = 0;
        for (auto h : orb) osize += h;

        OrbitDensityReport rep;
        for (std::uint32_t i = 0; i < orb.size(); ++i)
            if (orb[i]) rep.orbit.push_back(sp.decode(i));
        rep.V = V;
        rep.group_order = G_.order();
        const std::size_t in_v = count_in(orb, V);
        rep.epsilon_V = Rational(static_cast<long>(in_v), static_cast<long>(osize));
        detail::require(in_v > 0, "verify_bound: orbit misses V (empty density)");
        rep.C = C ? *C : Rational(1) / rep.epsilon_V;
        detail::require(rep.C >= 1, "verify_bound: C must be >= 1");
        detail::require(rep.epsilon_V >= Rational(1) / rep.C, "verify_bound: density precondition #(Ga cap V) >= #(Ga)/C fails");

        const std::size_t w = extremal(orb, osize, V);
        const Subspace& W = lattice_[w];
        rep.W = W;
        const std::size_t in_w = count_in(orb, W);
        rep.epsilon_W = Rational(static_cast<long>(in_w), static_cast<long>(osize));
        const Rational eps4 = pow_rat(rep.epsilon_W, 4);

        rep.optimality_holds = true;
        for (const auto& Wp : lattice_) {
            if (Wp.dim() >= W.dim() || !Wp.subset_of(W)) continue;
            if (Rational(static_cast<long>(count_in(orb, Wp)), static_cast<long>(osize)) >= eps4)
                rep.optimality_holds = false;
        }

        std::vector<FVector> s_vecs;
        for (std::uint32_t i = 0; i < orb.size(); ++i)
            if (orb[i] && W.members[i]) s_vecs.push_back(sp.decode(i));
        rep.generated_by_orbit = span(sp, s_vecs) == W;

        const auto& stab = stabilizer(w);
        detail::ensure(G_.order() % stab.size() == 0, "stabilizer order does not divide |G|");
        rep.stab_index = G_.order() / stab.size();
        rep.bound = Rational(3) * pow_rat(rep.C, 1ull << (2 * V.dim()));
        rep.bound_satisfied = Rational(static_cast<long>(rep.stab_index)) <= rep.bound;

        // cosets g Stab correspond to translates g W; gS cap g'S lies in the orbit part of gW cap g'W
        const auto& tr = translates(w);
        detail::ensure(tr.size() == rep.stab_index, "coset count differs from the stabilizer index");
        const auto orb_words = to_words(orb);
        rep.intersection_holds = true;
        for (std::size_t x = 0; x < tr.size() && rep.intersection_holds; ++x)
            for (std::size_t y = x + 1; y < tr.size(); ++y) {
                std::size_t common = 0;
                for (std::size_t k = 0; k < orb_words.size(); ++k)
                    common += static_cast<std::size_t>(__builtin_popcountll(orb_words[k] & tr[x][k] & tr[y][k]));
                if (Rational(static_cast<long>(common), static_cast<long>(osize)) >= eps4) {
                    rep.intersection_holds = false;
                    break;
                }
            }

        // witness: first g (breadth-first order) with g a in W, and H = Stab(W)
        for (std::size_t g = 0; g < G_.order(); ++g) {
            if (!W.contains(act(g, ai))) continue;
            OrbitWitness wit{g, stab};
            for (auto h : stab) detail::ensure(W.contains(act(h, act(g, ai))), "H g a not contained in W");
            rep.corollary_witness = std::move(wit);
            break;
        }
        return rep;
    }

    using Words = std::vector<std::uint64_t>;

    static Words to_words(const std::vector<std::uint8_t>& bits)
    {
        Words out((bits.size() + 63) / 64, 0);
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) out[i / 64] |= std::uint64_t{1} << (i % 64);
        return out;
    }

    /// The distinct subspaces g W, one per coset of Stab(W), in order of first appearance.
    const std::vector<Words>& translates(std::size_t w) const
    {
        if (!translates_[w]) {
            const auto& W = lattice_[w];
            std::vector<std::uint32_t> basis_idx;
            for (const auto& b : W.basis) basis_idx.push_back(G_.space.encode(b));
            std::map<std::vector<FVector>, Words> seen;
            std::vector<Words> out;
            for (std::size_t g = 0; g < G_.order(); ++g) {
                std::vector<FVector> img;
                for (auto b : basis_idx) img.push_back(G_.space.decode(act(g, b)));
                auto reduced = G_.space.rref(std::move(img));
                if (seen.count(reduced)) continue;
                const Subspace gw = span(G_.space, reduced);
                auto words = to_words(gw.members);
                seen.emplace(std::move(reduced), words);
                out.push_back(std::move(words));
            }
            translates_[w] = std::move(out);
        }
        return *translates_[w];
    }

private:
    const MatrixGroup& G_;
    std::vector<Subspace> lattice_;
    std::vector<std::uint32_t> action_;
    mutable std::vector<std::optional<std::vector<std::size_t>>> stab_;
    mutable std::vector<std::optional<std::vector<Words>>> translates_;
};

inline Subspace extremal_subspace(const MatrixGroup& G, const FVector& a, const Subspace& V, const Caps& caps = Caps{})
{
    OrbitAnalyzer an(G, caps);
    span(G.space, {a});
    const auto orb = an.orbit_members(G.space.encode(a));
    std::size_t osize = 0;
    for (auto h : orb) osize += h;
    return an.lattice()[an.extremal(orb, osize, V)];
}

inline OrbitDensityReport verify_bound(const MatrixGroup& G, const FVector& a, const Subspace& V,
                                       std::optional<Rational> C = std::nullopt, const Caps& caps = Caps{})
{
    OrbitAnalyzer an(G, caps);
    return an.verify(a, V, C);
}

} // namespace arith_mm
