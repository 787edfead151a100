#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <vector>

#include "arith_mm/torsion_model.hpp"

using namespace arith_mm;

namespace {

std::set<Point> lang_orbit_oracle(const ModelAmbient& amb, const Point& a, unsigned c)
{
    std::set<Point> out;
    for (std::uint64_t l = 1; l <= amb.N; ++l) {
        if (std::gcd(l, amb.N) != 1) continue;
        std::uint64_t m = 1;
        for (unsigned i = 0; i < c; ++i) m = m * l % amb.N;
        Point p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * m % amb.N;
        out.insert(p);
    }
    return out;
}

// all points of the span of the basis, by brute force
std::set<Point> span_oracle(const ModelAmbient& amb, const std::vector<Point>& basis)
{
    std::set<Point> out{amb.zero()};
    for (const auto& v : basis) {
        std::set<Point> next;
        for (const auto& p : out)
            for (std::uint64_t t = 0; t < amb.N; ++t) {
                Point q(p.size());
                for (std::size_t i = 0; i < p.size(); ++i) q[i] = (p[i] + t * v[i]) % amb.N;
                next.insert(q);
            }
        out = std::move(next);
    }
    return out;
}

} // namespace

TEST(ModelAmbient, ArithmeticAndEncoding)
{
    const ModelAmbient amb{6, 2};
    EXPECT_EQ(amb.rank(), 4u);
    EXPECT_EQ(amb.order_big(), 1296);
    const Point a{1, 2, 3, 4}, b{5, 5, 5, 5};
    EXPECT_EQ(amb.add(a, b), (Point{0, 1, 2, 3}));
    EXPECT_EQ(amb.scale(3, a), (Point{3, 0, 3, 0}));
    EXPECT_EQ(amb.point_order(a), 6u);
    EXPECT_EQ(amb.point_order(Point{3, 0, 3, 0}), 2u);
    for (std::uint64_t i = 0; i < 1296; i += 7) EXPECT_EQ(amb.encode(amb.decode(i)), i);
    EXPECT_THROW(amb.check_point(Point{1, 2, 3}), validation_error);
    EXPECT_THROW(amb.check_point(Point{1, 2, 3, 6}), validation_error);
    Caps caps;
    caps.ambient_order = 100;
    EXPECT_THROW(amb.checked_order(caps), cap_exceeded);
}

TEST(ModelSubvariety, SizeAndMembership)
{
    const ModelAmbient amb{6, 2};
    const auto B = ModelSubvariety::make(amb, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    EXPECT_EQ(B.dim(), 1u);
    EXPECT_EQ(B.size(), 36);
    const auto pts = span_oracle(amb, B.basis());
    for (std::uint64_t i = 0; i < 1296; ++i) EXPECT_EQ(B.contains(amb.decode(i)), pts.count(amb.decode(i)) > 0);
    const auto elems = B.elements();
    EXPECT_EQ(std::set<Point>(elems.begin(), elems.end()), pts);
    // not a direct summand: 2 (1,0,0,0) has elementary divisors (2), rejected
    EXPECT_THROW(ModelSubvariety::make(amb, {{2, 0, 0, 0}, {0, 1, 0, 0}}), validation_error);
    // odd rank
    EXPECT_THROW(ModelSubvariety::make(amb, {{1, 0, 0, 0}}), validation_error);
}

TEST(CosetOrder, Examples)
{
    const ModelAmbient amb{6, 2};
    const auto B = ModelSubvariety::make(amb, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    EXPECT_EQ(coset_order(Point{0, 0, 2, 5}, B), 1u);
    EXPECT_EQ(coset_order(Point{1, 0, 0, 0}, B), 6u);
    EXPECT_EQ(coset_order(Point{2, 0, 0, 0}, B), 3u);
    // oracle: least m with m a in B
    for (std::uint64_t i = 0; i < 1296; i += 5) {
        const auto a = amb.decode(i);
        std::uint64_t m = 1;
        while (!B.contains(amb.scale(m, a))) ++m;
        EXPECT_EQ(coset_order(a, B), m);
    }
}

TEST(LangOrbit, Examples)
{
    const ModelAmbient amb{5, 1};
    EXPECT_EQ(lang_orbit(amb, Point{0, 0}, 1), (std::vector<Point>{{0, 0}}));
    EXPECT_EQ(lang_orbit(amb, Point{1, 0}, 1), (std::vector<Point>{{1, 0}, {2, 0}, {3, 0}, {4, 0}}));
    EXPECT_EQ(lang_orbit(amb, Point{1, 0}, 2), (std::vector<Point>{{1, 0}, {4, 0}}));
}

TEST(LangOrbit, MatchesOracle)
{
    for (std::uint64_t N : {4, 6, 9, 12}) {
        const ModelAmbient amb{N, 1};
        for (unsigned c = 1; c <= 3; ++c)
            for (std::uint64_t i = 0; i < N * N; ++i) {
                const auto a = amb.decode(i);
                const auto orb = lang_orbit(amb, a, c);
                EXPECT_EQ(std::set<Point>(orb.begin(), orb.end()), lang_orbit_oracle(amb, a, c));
            }
    }
}

TEST(MultiplyCoset, Examples)
{
    const ModelAmbient amb5{5, 1};
    const auto c = TorsionCoset::make(Point{1, 2}, ModelSubvariety::zero(amb5));
    EXPECT_TRUE(multiply_coset(1, c).same_as(c));
    EXPECT_EQ(multiply_coset(7, c).point, (Point{2, 4}));
    const ModelAmbient amb6{6, 1};
    EXPECT_THROW(multiply_coset(2, TorsionCoset::make(Point{1, 0}, ModelSubvariety::zero(amb6))), validation_error);
}

TEST(TorsionCount, Examples)
{
    const ModelAmbient amb6{6, 2};
    const auto B = ModelSubvariety::make(amb6, {{1, 0, 0, 0}, {0, 1, 0, 0}});
    EXPECT_EQ(torsion_count(B, 1).closed_form, 1);
    EXPECT_EQ(torsion_count(B, 2).closed_form, 4);
    ASSERT_TRUE(torsion_count(B, 2).enumerated.has_value());
    EXPECT_EQ(*torsion_count(B, 2).enumerated, 4);
    const ModelAmbient amb15{15, 2};
    const auto B15 = ModelSubvariety::make(amb15, {{1, 0, 0, 0}, {0, 1, 0, 0}});
    EXPECT_EQ(torsion_count(B15, 2).closed_form, 1);
}

TEST(DegreePushforward, Examples)
{
    // model check: N = 15, g = 2, b = 1, q = 3 or 5: [q](a + B) = qa + qB is a single coset
    const ModelAmbient amb{15, 2};
    const auto B = ModelSubvariety::make(amb, {{1, 2, 0, 0}, {0, 1, 0, 0}});
    const auto pts = span_oracle(amb, B.basis());
    for (std::uint64_t q : {3, 5, 15}) {
        std::set<Point> image;
        const Point a{4, 7, 1, 9};
        for (const auto& x : pts) image.insert(amb.scale(q, amb.add(a, x)));
        std::set<Point> qB;
        for (const auto& x : pts) qB.insert(amb.scale(q, x));
        EXPECT_EQ(image.size(), qB.size());
        EXPECT_EQ(degree_pushforward(1, 1, torsion_count(B, q).closed_form, q), 1);
    }
    EXPECT_EQ(degree_pushforward(3, 1, 4, 2), 3);
    EXPECT_EQ(degree_pushforward(1, 0, 1, 7), 1);
    EXPECT_THROW(degree_pushforward(1, 1, 3, 2), validation_error);
}

TEST(CorhinDerive, Examples)
{
    const auto v = corhin_derive(1, 1, 2, 3);
    EXPECT_EQ(v.torsion_q, 4);
    EXPECT_EQ(v.torsion_q_prime, 9);
    EXPECT_EQ(v.torsion_product, 36);
    const auto z = corhin_derive(5, 0, 7, 11);
    EXPECT_EQ(z.torsion_q, 1);
    EXPECT_EQ(z.torsion_q_prime, 1);
    EXPECT_EQ(z.torsion_product, 1);
    EXPECT_THROW(corhin_derive(1, 1, 2, 4), validation_error);
}

TEST(HindryCriterion, Examples)
{
    EXPECT_TRUE(hindry_criterion({}, 2, 3).vacuous);
    const ModelAmbient amb{5, 1};
    const auto zero = ModelSubvariety::zero(amb);
    const auto r = hindry_criterion({TorsionCoset::make(Point{1, 0}, zero)}, 2, 3);
    EXPECT_FALSE(r.vacuous);
    EXPECT_FALSE(r.hypothesis_holds);
    const auto full = ModelSubvariety::full(amb);
    const auto s = hindry_criterion({TorsionCoset::make(Point{1, 0}, full)}, 2, 3);
    EXPECT_TRUE(s.hypothesis_holds);
    EXPECT_EQ(s.degree, 1u);
}

TEST(SummandCatalog, Counts)
{
    EXPECT_EQ(summand_catalog(ModelAmbient{3, 1}).size(), 2u);
    // (Z/p)^2: {0} and the full group; (Z/p)^4 adds the p^3 + p^2 + p + 1 ... planes
    // counted by the Gaussian binomial [4 choose 2]_p = (p^2 + 1)(p^2 + p + 1)
    const auto c2 = summand_catalog(ModelAmbient{2, 2});
    EXPECT_EQ(c2.size(), 1u + 35u + 1u);
    const auto c3 = summand_catalog(ModelAmbient{3, 2});
    EXPECT_EQ(c3.size(), 1u + 130u + 1u);
    // CRT: summands of (Z/6)^4 are pairs of summands of equal rank mod 2 and mod 3
    EXPECT_EQ(summand_catalog(ModelAmbient{6, 2}).size(), 1u + 35u * 130u + 1u);
}

TEST(SpecialClosure, Examples)
{
    const ModelAmbient amb0{5, 1};
    const auto z = special_closure(amb0, {Point{0, 0}}, 1);
    ASSERT_EQ(z.components.size(), 1u);
    EXPECT_EQ(z.points, (std::vector<Point>{{0, 0}}));

    const auto orb = lang_orbit(amb0, Point{1, 0}, 1);
    const auto r = special_closure(amb0, orb, 1);
    ASSERT_EQ(r.components.size(), 1u);
    EXPECT_EQ(r.components[0].subgroup.dim(), 0u);
    EXPECT_EQ(r.points, orb);

    const ModelAmbient amb3{3, 1};
    std::vector<Point> all;
    for (std::uint64_t i = 0; i < 9; ++i) all.push_back(amb3.decode(i));
    const auto f = special_closure(amb3, all, 1);
    ASSERT_EQ(f.components.size(), 1u);
    EXPECT_EQ(f.components[0].subgroup.dim(), 1u);
    EXPECT_EQ(f.points.size(), 9u);
}

TEST(SpecialClosure, PointsAreLangSaturation)
{
    const ModelAmbient amb{6, 1};
    const std::vector<Point> S{{1, 0}, {2, 3}, {3, 3}};
    const auto r = special_closure(amb, S, 1);
    std::set<Point> expected;
    for (const auto& s : S)
        for (const auto& p : lang_orbit_oracle(amb, s, 1)) expected.insert(p);
    EXPECT_EQ(std::set<Point>(r.points.begin(), r.points.end()), expected);
    std::set<Point> union_pts;
    for (const auto& comp : r.components)
        for (const auto& p : comp.points()) union_pts.insert(p);
    EXPECT_EQ(union_pts, expected);
}

TEST(KeypropWitness, Examples)
{
    const ModelAmbient amb{6, 2};
    const Point a{1, 0, 0, 0};
    const auto orb = lang_orbit(amb, a, 1);
    const auto w = keyprop_witness(amb, orb, a, 1, BigInt(6));
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->component.subgroup.dim(), 0u);
    EXPECT_EQ(w->component.order, 6u);

    std::vector<Point> all;
    for (std::uint64_t i = 0; i < 1296; ++i) all.push_back(amb.decode(i));
    const auto f = keyprop_witness(amb, all, a, 1, BigInt(6));
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->component.order, 1u);
    EXPECT_EQ(f->component.subgroup.dim(), 2u);
    EXPECT_EQ(f->component.alpha, amb.zero());
}

TEST(KeypropWitness, ConstructedSmallerOrder)
{
    // V = L a united with L alpha' + B' where a lies in alpha' + B' and ord(alpha' + B') = 2 < 6
    const ModelAmbient amb{6, 2};
    const auto B = ModelSubvariety::make(amb, {{0, 1, 0, 0}, {0, 0, 1, 0}});
    const Point a{3, 1, 0, 0};
    std::set<Point> V;
    for (const auto& p : lang_orbit_oracle(amb, a, 1)) V.insert(p);
    for (const auto& x : span_oracle(amb, B.basis()))
        for (const auto& p : lang_orbit_oracle(amb, Point{3, 0, 0, 0}, 1)) V.insert(amb.add(p, x));
    const std::vector<Point> Vv(V.begin(), V.end());
    const auto w = keyprop_witness(amb, Vv, a, 1, BigInt(6));
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->component.order, 2u);
    EXPECT_EQ(w->component.alpha, (Point{3, 0, 0, 0}));
    for (const auto& p : w->component.points()) EXPECT_TRUE(V.count(p));
    EXPECT_THROW(keyprop_witness(amb, {a}, a, 1, BigInt(6)), validation_error);
}
