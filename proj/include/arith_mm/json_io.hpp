#pragma once

// JSON encoding of reports and decoding of matrix / algebra inputs. Unbounded integers and
// rationals are written as decimal strings.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "arith_mm/effective_bounds.hpp"
#include "arith_mm/errors.hpp"
#include "arith_mm/gl_orbit.hpp"
#include "arith_mm/integer_arithmetic.hpp"
#include "arith_mm/number_types.hpp"
#include "arith_mm/semisimple_algebra.hpp"
#include "arith_mm/torsion_model.hpp"

namespace arith_mm::json_io {

using Json = nlohmann::ordered_json;

inline std::string big(const BigInt& v) { return to_string(v); }
inline std::string rat(const Rational& v) { return to_string(v); }

// ---- parsing helpers ----

inline BigInt parse_big(const std::string& s)
{
    detail::require(!s.empty(), "empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    detail::require(i < s.size(), "malformed integer: " + s);
    for (std::size_t j = i; j < s.size(); ++j)
        detail::require(s[j] >= '0' && s[j] <= '9', "malformed integer: " + s);
    return BigInt(s);
}

/// An integer, a decimal string, "p/q", or a [num, den] pair.
inline Rational parse_rational(const Json& j)
{
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(parse_big(s));
        const BigInt den = parse_big(s.substr(slash + 1));
        detail::require(den != 0, "zero denominator");
        return Rational(parse_big(s.substr(0, slash)), den);
    }
    if (j.is_array() && j.size() == 2) {
        const Rational num = parse_rational(j[0]);
        const Rational den = parse_rational(j[1]);
        detail::require(den != 0, "zero denominator");
        return num / den;
    }
    throw validation_error("expected a rational (integer, \"p/q\" or [num, den])");
}

inline std::int64_t parse_int(const Json& j, const char* what)
{
    detail::require(j.is_number_integer(), std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

inline void reject_unknown(const Json& obj, const std::vector<std::string>& allowed)
{
    detail::require(obj.is_object(), "expected a JSON object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const auto& a : allowed) ok = ok || a == item.key();
        detail::require(ok, "unknown field: " + item.key());
    }
}

inline const Json& field(const Json& obj, const char* name)
{
    detail::require(obj.contains(name), std::string("missing field: ") + name);
    return obj.at(name);
}

inline QMat parse_qmatrix(const Json& j, std::size_t n)
{
    detail::require(j.is_array() && j.size() == n, "matrix must have " + std::to_string(n) + " rows");
    QMat m;
    for (const auto& row : j) {
        detail::require(row.is_array() && row.size() == n, "matrix rows must have " + std::to_string(n) + " entries");
        QVec r;
        for (const auto& x : row) r.push_back(parse_rational(x));
        m.push_back(std::move(r));
    }
    return m;
}

/// A list of block matrices.
inline AlgebraElement parse_element(const SplitSemisimpleAlgebra& a, const Json& j)
{
    detail::require(j.is_array() && j.size() == a.blocks().size(),
                    "algebra element must list one matrix per block");
    std::vector<QMat> blocks;
    for (std::size_t k = 0; k < a.blocks().size(); ++k) blocks.push_back(parse_qmatrix(j[k], a.blocks()[k]));
    return AlgebraElement::from_blocks(a, std::move(blocks));
}

inline SplitSemisimpleAlgebra parse_algebra(const Json& j)
{
    detail::require(j.is_array() && !j.empty(), "algebra must be a non-empty list of block sizes");
    std::vector<unsigned> blocks;
    for (const auto& b : j) {
        const auto v = parse_int(b, "block size");
        detail::require(v >= 1 && v <= 16, "block sizes must be in 1..16");
        blocks.push_back(static_cast<unsigned>(v));
    }
    return SplitSemisimpleAlgebra(blocks);
}

/// {"multiplicities": [[...]...], "conjugators": [...]} or {"images": [element...]}
inline AlgebraEmbedding parse_embedding(const SplitSemisimpleAlgebra& M, const SplitSemisimpleAlgebra& N, const Json& j)
{
    reject_unknown(j, {"multiplicities", "conjugators", "images"});
    if (j.contains("images")) {
        const auto& imgs = j.at("images");
        detail::require(imgs.is_array(), "images must be a list");
        std::vector<AlgebraElement> images;
        for (const auto& e : imgs) images.push_back(parse_element(N, e));
        return AlgebraEmbedding::make(M, N, std::move(images));
    }
    const auto& mj = field(j, "multiplicities");
    detail::require(mj.is_array(), "multiplicities must be a list of rows");
    std::vector<std::vector<unsigned>> mult;
    for (const auto& row : mj) {
        detail::require(row.is_array(), "multiplicity rows must be lists");
        std::vector<unsigned> r;
        for (const auto& x : row) {
            const auto v = parse_int(x, "multiplicity");
            detail::require(v >= 0 && v <= 16, "multiplicities must be in 0..16");
            r.push_back(static_cast<unsigned>(v));
        }
        mult.push_back(std::move(r));
    }
    std::vector<QMat> conj;
    if (j.contains("conjugators")) {
        const auto& cj = j.at("conjugators");
        detail::require(cj.is_array() && cj.size() == N.blocks().size(), "one conjugator per target block");
        for (std::size_t k = 0; k < cj.size(); ++k) conj.push_back(parse_qmatrix(cj[k], N.blocks()[k]));
    }
    return AlgebraEmbedding::block_diagonal(M, N, mult, conj);
}

/// {"multiplicities": [...], "conjugator": matrix} or {"dim": n, "images": [matrix...]}
inline Representation parse_representation(const SplitSemisimpleAlgebra& N, const Json& j)
{
    reject_unknown(j, {"multiplicities", "conjugator", "dim", "images"});
    if (j.contains("images")) {
        const auto dim = parse_int(field(j, "dim"), "dim");
        detail::require(dim >= 1 && dim <= 256, "representation dim must be in 1..256");
        std::vector<QMat> images;
        for (const auto& m : j.at("images")) images.push_back(parse_qmatrix(m, static_cast<std::size_t>(dim)));
        return Representation::make(N, static_cast<std::size_t>(dim), std::move(images));
    }
    std::vector<unsigned> mult;
    for (const auto& x : field(j, "multiplicities")) {
        const auto v = parse_int(x, "multiplicity");
        detail::require(v >= 1 && v <= 16, "representation multiplicities must be in 1..16");
        mult.push_back(static_cast<unsigned>(v));
    }
    std::optional<QMat> conj;
    if (j.contains("conjugator")) {
        std::size_t dim = 0;
        for (std::size_t k = 0; k < mult.size() && k < N.blocks().size(); ++k) dim += mult[k] * N.blocks()[k];
        conj = parse_qmatrix(j.at("conjugator"), dim);
    }
    return Representation::natural(N, mult, conj);
}

inline FMatrix parse_fmatrix(const FiniteSpace& space, const Json& j)
{
    detail::require(j.is_array(), "matrix must be a list of rows");
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& row : j) {
        detail::require(row.is_array(), "matrix rows must be lists");
        std::vector<std::int64_t> r;
        for (const auto& x : row) r.push_back(parse_int(x, "matrix entry"));
        rows.push_back(std::move(r));
    }
    return reduce_matrix(space, rows);
}

inline FVector parse_fvector(const FiniteSpace& space, const Json& j)
{
    detail::require(j.is_array() && j.size() == space.dim, "vector must have dim entries");
    FVector v;
    const auto l = static_cast<std::int64_t>(space.ell);
    for (const auto& x : j) v.push_back(static_cast<std::uint32_t>(((parse_int(x, "vector entry") % l) + l) % l));
    return v;
}

// ---- encoders ----

inline Json qmatrix(const QMat& m)
{
    Json out = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(rat(x));
        out.push_back(std::move(r));
    }
    return out;
}

inline Json element(const AlgebraElement& e)
{
    Json out = Json::array();
    for (const auto& b : e.data) out.push_back(qmatrix(b));
    return out;
}

inline Json point(const Point& p)
{
    Json out = Json::array();
    for (auto x : p) out.push_back(x);
    return out;
}

inline Json points(const std::vector<Point>& ps)
{
    Json out = Json::array();
    for (const auto& p : ps) out.push_back(point(p));
    return out;
}

inline Json subgroup(const ModelSubvariety& B)
{
    return Json{{"N", B.ambient().N}, {"g", B.ambient().g}, {"dim", B.dim()}, {"basis", points(B.basis())}};
}

inline Json lang_coset(const LangCoset& c)
{
    Json out{{"point", point(c.alpha)},
             {"basis", points(c.subgroup.basis())},
             {"N", c.subgroup.ambient().N},
             {"g", c.subgroup.ambient().g},
             {"dim", c.subgroup.dim()},
             {"order", c.order}};
    return out;
}

inline Json fvector(const FVector& v)
{
    Json out = Json::array();
    for (auto x : v) out.push_back(x);
    return out;
}

inline Json fmatrix(const FiniteSpace& space, const FMatrix& m)
{
    Json out = Json::array();
    for (unsigned i = 0; i < space.dim; ++i) {
        Json row = Json::array();
        for (unsigned j = 0; j < space.dim; ++j) row.push_back(m[i * space.dim + j]);
        out.push_back(std::move(row));
    }
    return out;
}

inline Json subspace(const Subspace& s)
{
    Json basis = Json::array();
    for (const auto& b : s.basis) basis.push_back(fvector(b));
    return Json{{"dim", s.dim()}, {"basis", basis}};
}

inline Json jacobsthal_report(std::uint64_t d)
{
    const auto f = factorize(d);
    return Json{{"d", d}, {"g", jacobsthal(f)}, {"kanold", jacobsthal_bounds(f).kanold}};
}

inline Json coprime_shift_report(const CoprimeShift& s)
{
    return Json{{"k", s.k}, {"value", s.value}, {"bound", s.bound}};
}

inline Json bound_params(const BoundParams& p)
{
    return Json{{"D", p.D},
                {"Delta", p.Delta},
                {"c", p.c},
                {"d", p.d},
                {"p", p.p},
                {"eps", rat(p.eps)},
                {"profile", p.profile.name},
                {"alpha", p.profile.alpha},
                {"beta", p.profile.beta},
                {"x_variant", p.x_variant == XVariant::ceil_root ? "ceil_root" : "doubled"}};
}

inline Json bound_report(const BoundReport& r)
{
    Json iterates = Json::array();
    Json exact = Json::array();
    for (std::size_t i = 0; i < r.f_iterates.values.size(); ++i) {
        iterates.push_back(big(r.f_iterates.values[i]));
        exact.push_back(static_cast<bool>(r.f_iterates.exact[i]));
    }
    Json threshold{{"search_threshold", big(r.threshold.search_threshold)},
                   {"closed_form", big(r.threshold.closed_form)},
                   {"value", big(r.threshold.value)},
                   {"exhaustive", r.threshold.exhaustive},
                   {"last_violator", r.threshold.last_violator ? Json(big(*r.threshold.last_violator)) : Json()},
                   {"certified_from_omega", r.threshold.certified_from_omega},
                   {"alpha_prime", big(r.threshold.alpha_prime)},
                   {"beta_prime", rat(r.threshold.beta_prime)}};
    return Json{{"params", bound_params(r.params)},
                {"x", big(r.x)},
                {"n", big(r.n)},
                {"N", big(r.capital_n)},
                {"sigma_size", big(r.sigma_size)},
                {"f", big(r.f_value)},
                {"f_iterates", iterates},
                {"f_iterates_exact", exact},
                {"exponents",
                 {{"lambda", rat(r.exponents.lambda)},
                  {"delta", rat(r.exponents.delta)},
                  {"delta_prime", rat(r.exponents.delta_prime)}}},
                {"threshold", threshold},
                {"final_delta", big(r.threshold.value)},
                {"eps_slack_ok", r.eps_slack_ok},
                {"rosser_bound", r.x >= 4 ? Json(r.rosser_bound) : Json()}};
}

inline Json orbit_report(const MatrixGroup& G, const OrbitDensityReport& r)
{
    Json orbit = Json::array();
    for (const auto& v : r.orbit) orbit.push_back(fvector(v));
    Json witness;
    if (r.corollary_witness) {
        Json H = Json::array();
        for (auto h : r.corollary_witness->H) H.push_back(fmatrix(G.space, G.elements[h]));
        witness = Json{{"g", fmatrix(G.space, G.elements[r.corollary_witness->g])}, {"H", H}};
    }
    return Json{{"ell", G.space.ell},
                {"dim", G.space.dim},
                {"group_order", r.group_order},
                {"orbit", orbit},
                {"V", subspace(r.V)},
                {"C", rat(r.C)},
                {"W", subspace(r.W)},
                {"epsilon_V", rat(r.epsilon_V)},
                {"epsilon_W", rat(r.epsilon_W)},
                {"stab_index", r.stab_index},
                {"bound", rat(r.bound)},
                {"bound_satisfied", r.bound_satisfied},
                {"optimality_holds", r.optimality_holds},
                {"intersection_holds", r.intersection_holds},
                {"generated_by_orbit", r.generated_by_orbit},
                {"corollary_witness", witness}};
}

} // namespace arith_mm::json_io
