#include <gtest/gtest.h>

#include "arith_mm/caps.hpp"
#include "arith_mm/json_io.hpp"

using namespace arith_mm;
using json_io::Json;

TEST(Caps, FromList)
{
    const auto c = Caps::from_list("100,200,300");
    EXPECT_EQ(c.ambient_order, 100u);
    EXPECT_EQ(c.group_size, 200u);
    EXPECT_EQ(c.lattice_points, 300u);
    const auto d = Caps::from_list(",7");
    EXPECT_EQ(d.ambient_order, Caps{}.ambient_order);
    EXPECT_EQ(d.group_size, 7u);
    EXPECT_THROW(Caps::from_list("1,2,3,4"), validation_error);
    EXPECT_THROW(Caps::from_list("0"), validation_error);
    EXPECT_THROW(Caps::from_list("12x"), validation_error);
}

TEST(JsonIo, Rationals)
{
    EXPECT_EQ(json_io::parse_rational(Json(3)), 3);
    EXPECT_EQ(json_io::parse_rational(Json("-4/6")), Rational(-2, 3));
    EXPECT_EQ(json_io::parse_rational(Json::parse("[1, 3]")), Rational(1, 3));
    EXPECT_EQ(json_io::parse_rational(Json("123456789012345678901234567890")),
              Rational(BigInt("123456789012345678901234567890")));
    EXPECT_THROW(json_io::parse_rational(Json("1/0")), validation_error);
    EXPECT_THROW(json_io::parse_rational(Json(1.5)), validation_error);
    EXPECT_THROW(json_io::parse_rational(Json("x")), validation_error);
}

TEST(JsonIo, BigIntegersAreStrings)
{
    const auto j = json_io::jacobsthal_report(30);
    EXPECT_EQ(j.dump(), R"({"d":30,"g":6,"kanold":8})");
    BoundParams p;
    p.D = 1;
    p.Delta = 1;
    const auto r = json_io::bound_report(bound_report(p));
    EXPECT_TRUE(r.at("f").is_string());
    EXPECT_EQ(r.at("f").get<std::string>(), "25");
    EXPECT_EQ(r.at("final_delta").get<std::string>(), "7");
}

TEST(JsonIo, RejectsUnknownFields)
{
    EXPECT_THROW(json_io::reject_unknown(Json::parse(R"({"a":1,"b":2})"), {"a"}), validation_error);
    EXPECT_NO_THROW(json_io::reject_unknown(Json::parse(R"({"a":1})"), {"a", "b"}));
}

TEST(JsonIo, AlgebraInputs)
{
    const auto A = json_io::parse_algebra(Json::parse("[2, 1]"));
    EXPECT_EQ(A.total_dim(), 5u);
    const auto e = json_io::parse_element(A, Json::parse(R"([[[1, 0], [0, "1/2"]], [[[3, 4]]]])"));
    EXPECT_EQ(e.data[0][1][1], Rational(1, 2));
    EXPECT_EQ(e.data[1][0][0], Rational(3, 4));
    EXPECT_THROW(json_io::parse_element(A, Json::parse("[[[1]]]")), validation_error);
    EXPECT_THROW(json_io::parse_algebra(Json::parse("[0]")), validation_error);
    const auto round = json_io::element(e);
    EXPECT_EQ(json_io::parse_element(A, round), e);
}

TEST(JsonIo, FiniteFieldInputs)
{
    const FiniteSpace s{5, 2};
    EXPECT_EQ(json_io::parse_fmatrix(s, Json::parse("[[7, -1], [0, 1]]")), (FMatrix{2, 4, 0, 1}));
    EXPECT_EQ(json_io::parse_fvector(s, Json::parse("[-1, 6]")), (FVector{4, 1}));
    EXPECT_THROW(json_io::parse_fvector(s, Json::parse("[1]")), validation_error);
    EXPECT_THROW(json_io::parse_fmatrix(s, Json::parse("[[1, 0]]")), validation_error);
}
