#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "arith_mm/gl_orbit.hpp"

using namespace arith_mm;

namespace {

MatrixGroup group_of(std::uint32_t ell, unsigned dim, const std::vector<std::vector<std::vector<std::int64_t>>>& gens)
{
    const FiniteSpace space{ell, dim};
    std::vector<FMatrix> ms;
    for (const auto& g : gens) ms.push_back(reduce_matrix(space, g));
    return generate_group(ms, ell, dim, 100000);
}

// number of k-dimensional subspaces of F_q^n
std::uint64_t gaussian_binomial(std::uint64_t q, unsigned n, unsigned k)
{
    std::uint64_t num = 1, den = 1;
    for (unsigned i = 0; i < k; ++i) {
        std::uint64_t a = 1, b = 1;
        for (unsigned j = 0; j < n - i; ++j) a *= q;
        for (unsigned j = 0; j < i + 1; ++j) b *= q;
        num *= a - 1;
        den *= b - 1;
    }
    return num / den;
}

} // namespace

TEST(FiniteSpace, MatrixBasics)
{
    const FiniteSpace s{5, 2};
    const FMatrix m{2, 1, 0, 3};
    EXPECT_EQ(s.multiply(m, m), (FMatrix{4, 0, 0, 4}));
    EXPECT_EQ(s.inverse(2), 3u);
    EXPECT_FALSE(s.invertible(FMatrix{1, 2, 2, 4}));
    EXPECT_EQ(s.apply(m, FVector{1, 1}), (FVector{3, 3}));
    for (std::uint32_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.encode(s.decode(i)), i);
}

TEST(GenerateGroup, Examples)
{
    EXPECT_EQ(group_of(3, 2, {{{1, 0}, {0, 1}}}).order(), 1u);
    const auto c4 = group_of(5, 1, {{{2}}});
    ASSERT_EQ(c4.order(), 4u);
    std::vector<std::uint32_t> elems;
    for (const auto& g : c4.elements) elems.push_back(g[0]);
    EXPECT_EQ(elems, (std::vector<std::uint32_t>{1, 2, 4, 3}));
    EXPECT_EQ(group_of(3, 2, {{{0, 1}, {1, 0}}}).order(), 2u);
    // |GL_2(F_3)| = (9 - 1)(9 - 3)
    EXPECT_EQ(group_of(3, 2, {{{1, 1}, {0, 1}}, {{0, 1}, {2, 0}}, {{2, 0}, {0, 1}}}).order(), 48u);
    EXPECT_THROW(generate_group({FMatrix{1, 1, 1, 1}}, 3, 2, 100), validation_error);
    EXPECT_THROW(generate_group({FMatrix{1, 1, 0, 1}, FMatrix{0, 1, 2, 0}, FMatrix{2, 0, 0, 1}}, 3, 2, 10), cap_exceeded);
    EXPECT_THROW(generate_group({FMatrix{1}}, 4, 1, 10), validation_error);
}

TEST(EnumerateSubspaces, CountsMatchGaussianBinomials)
{
    for (auto [q, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 3}, {3, 2}, {3, 3}, {5, 2}, {2, 4}}) {
        std::uint64_t total = 0;
        for (unsigned k = 0; k <= n; ++k) total += gaussian_binomial(q, n, k);
        const auto lat = enumerate_subspaces(FiniteSpace{q, n});
        EXPECT_EQ(lat.size(), total);
        EXPECT_TRUE(std::is_sorted(lat.begin(), lat.end()));
        for (const auto& W : lat) {
            std::size_t members = 0;
            for (auto m : W.members) members += m;
            std::size_t expect = 1;
            for (unsigned i = 0; i < W.dim(); ++i) expect *= q;
            EXPECT_EQ(members, expect);
        }
    }
    Caps caps;
    caps.lattice_points = 8;
    EXPECT_THROW(enumerate_subspaces(FiniteSpace{3, 2}, caps), cap_exceeded);
}

TEST(Orbit, Examples)
{
    const auto c4 = group_of(5, 1, {{{2}}});
    EXPECT_EQ(orbit(c4, FVector{0}), (std::vector<FVector>{{0}}));
    EXPECT_EQ(orbit(c4, FVector{1}), (std::vector<FVector>{{1}, {2}, {3}, {4}}));
    const auto triv = group_of(3, 2, {{{1, 0}, {0, 1}}});
    EXPECT_EQ(orbit(triv, FVector{2, 1}), (std::vector<FVector>{{2, 1}}));
}

TEST(Epsilon, Examples)
{
    const FiniteSpace s{5, 2};
    const auto G = group_of(5, 2, {{{2, 0}, {0, 1}}});
    const FVector a{1, 1};
    EXPECT_EQ(epsilon(G, a, span(s, {{1, 0}, {0, 1}})), 1);
    EXPECT_EQ(epsilon(G, a, span(s, {})), 0);
    EXPECT_EQ(epsilon(G, a, span(s, {{1, 0}})), 0);
    EXPECT_EQ(epsilon(G, a, span(s, {{1, 1}})), Rational(1, 4));
}

TEST(ExtremalSubspace, Examples)
{
    const FiniteSpace s1{5, 1};
    const auto scalars = group_of(5, 1, {{{2}}});
    const auto V1 = span(s1, {{1}});
    EXPECT_EQ(extremal_subspace(scalars, FVector{1}, V1), V1);
    const auto r = verify_bound(scalars, FVector{1}, V1, Rational(1));
    EXPECT_EQ(r.stab_index, 1u);
    EXPECT_EQ(r.bound, 3);
    EXPECT_TRUE(r.bound_satisfied);

    // diag(F_3^x, 1) on F_3^2, a = (1,1): orbit {(1,1),(2,1)} spans F_3^2; brute force over all 6 subspaces
    const FiniteSpace s2{3, 2};
    const auto G = group_of(3, 2, {{{2, 0}, {0, 1}}});
    const auto V = span(s2, {{1, 0}, {0, 1}});
    const auto W = extremal_subspace(G, FVector{1, 1}, V);
    // oracle: maximise eps(W')^(4^-dim W'), preferring smaller dimension on ties
    const auto lat = enumerate_subspaces(s2);
    const auto orb = orbit(G, FVector{1, 1});
    const BigInt o(orb.size());
    const Subspace* best = nullptr;
    std::size_t best_cnt = 0;
    for (const auto& Wp : lat) {
        std::size_t cnt = 0;
        for (const auto& v : orb) cnt += Wp.contains(s2.encode(v));
        if (cnt == 0) continue;
        if (!best) {
            best = &Wp;
            best_cnt = cnt;
            continue;
        }
        // cnt^(4^-k') > best^(4^-k) after raising both sides to 4^(k + k'); ties keep the earlier entry
        if (pow_big(BigInt(cnt), 1ull << (2 * best->dim())) * pow_big(o, 1ull << (2 * Wp.dim())) >
            pow_big(BigInt(best_cnt), 1ull << (2 * Wp.dim())) * pow_big(o, 1ull << (2 * best->dim()))) {
            best = &Wp;
            best_cnt = cnt;
        }
    }
    ASSERT_NE(best, nullptr);
    EXPECT_EQ(W, *best);
}

TEST(VerifyBound, PermutationExample)
{
    const FiniteSpace s{3, 2};
    const auto G = group_of(3, 2, {{{0, 1}, {1, 0}}});
    const auto V = span(s, {{1, 0}});
    const auto r = verify_bound(G, FVector{1, 0}, V, Rational(2));
    EXPECT_EQ(r.bound, 48);
    EXPECT_LE(r.stab_index, 2u);
    EXPECT_TRUE(r.bound_satisfied);
    EXPECT_TRUE(r.optimality_holds);
    ASSERT_TRUE(r.corollary_witness.has_value());
    const auto ga = s.apply(G.elements[r.corollary_witness->g], FVector{1, 0});
    for (auto h : r.corollary_witness->H) EXPECT_TRUE(r.W.contains(s.encode(s.apply(G.elements[h], ga))));
}

TEST(VerifyBound, TrivialGroup)
{
    const FiniteSpace s{3, 2};
    const auto G = group_of(3, 2, {{{1, 0}, {0, 1}}});
    const auto r = verify_bound(G, FVector{1, 2}, span(s, {{1, 2}}), Rational(1));
    EXPECT_EQ(r.stab_index, 1u);
    EXPECT_TRUE(r.bound_satisfied);
    EXPECT_THROW(verify_bound(G, FVector{1, 2}, span(s, {{1, 0}})), validation_error);
}

TEST(OrbitAnalyzer, StabilizerMatchesBruteForce)
{
    const FiniteSpace s{3, 2};
    const auto G = group_of(3, 2, {{{1, 1}, {0, 1}}, {{2, 0}, {0, 1}}});
    const OrbitAnalyzer an(G);
    for (std::size_t wi = 0; wi < an.lattice().size(); ++wi) {
        const auto& W = an.lattice()[wi];
        std::size_t count = 0;
        for (const auto& g : G.elements) {
            bool fixes = true;
            for (std::uint32_t v = 0; v < s.size(); ++v)
                if (W.contains(v) && !W.contains(s.encode(s.apply(g, s.decode(v))))) fixes = false;
            count += fixes;
        }
        EXPECT_EQ(an.stabilizer(wi).size(), count);
    }
}
