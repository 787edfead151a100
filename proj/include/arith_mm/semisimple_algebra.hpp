#pragma once

// Split semisimple algebras over Q (products of full matrix algebras), embeddings,
// faithful representations, right-ideal generators and idempotent lifting.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arith_mm/errors.hpp"
#include "arith_mm/number_types.hpp"
#include "arith_mm/rational_linalg.hpp"

namespace arith_mm {

using linalg::QMat;
using linalg::QVec;

class SplitSemisimpleAlgebra {
public:
    SplitSemisimpleAlgebra() = default;

    explicit SplitSemisimpleAlgebra(std::vector<unsigned> blocks) : blocks_(std::move(blocks))
    {
        detail::require(!blocks_.empty(), "algebra needs at least one block");
        for (auto n : blocks_) detail::require(n >= 1 && n <= 16, "block sizes must be in 1..16");
        for (auto n : blocks_) {
            offsets_.push_back(total_dim_);
            total_dim_ += static_cast<std::size_t>(n) * n;
        }
    }

    const std::vector<unsigned>& blocks() const { return blocks_; }
    std::size_t total_dim() const { return total_dim_; }
    std::size_t offset(std::size_t k) const { return offsets_[k]; }

    bool operator==(const SplitSemisimpleAlgebra& o) const { return blocks_ == o.blocks_; }

private:
    std::vector<unsigned> blocks_;
    std::vector<std::size_t> offsets_;
    std::size_t total_dim_ = 0;
};

struct AlgebraElement {
    SplitSemisimpleAlgebra parent;
    std::vector<QMat> data;  // one square matrix per block

    static AlgebraElement zero(const SplitSemisimpleAlgebra& a)
    {
        AlgebraElement e{a, {}};
        for (auto n : a.blocks()) e.data.push_back(linalg::zeros(n, n));
        return e;
    }

    static AlgebraElement one(const SplitSemisimpleAlgebra& a)
    {
        AlgebraElement e{a, {}};
        for (auto n : a.blocks()) e.data.push_back(linalg::identity(n));
        return e;
    }

    /// Standard basis: block by block, entries row-major.
    static AlgebraElement basis(const SplitSemisimpleAlgebra& a, std::size_t idx)
    {
        detail::require(idx < a.total_dim(), "basis index out of range");
        QVec v(a.total_dim(), Rational(0));
        v[idx] = 1;
        return from_vector(a, v);
    }

    static AlgebraElement from_vector(const SplitSemisimpleAlgebra& a, const QVec& v)
    {
        detail::require(v.size() == a.total_dim(), "coordinate vector has the wrong length");
        AlgebraElement e = zero(a);
        for (std::size_t k = 0; k < a.blocks().size(); ++k) {
            const unsigned n = a.blocks()[k];
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = 0; j < n; ++j) e.data[k][i][j] = v[a.offset(k) + i * n + j];
        }
        return e;
    }

    static AlgebraElement from_blocks(const SplitSemisimpleAlgebra& a, std::vector<QMat> blocks)
    {
        detail::require(blocks.size() == a.blocks().size(), "wrong number of blocks");
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            detail::require(blocks[k].size() == a.blocks()[k], "block has the wrong size");
            for (const auto& row : blocks[k]) detail::require(row.size() == a.blocks()[k], "block is not square");
        }
        return {a, std::move(blocks)};
    }

    QVec to_vector() const
    {
        QVec v;
        v.reserve(parent.total_dim());
        for (const auto& m : data)
            for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
        return v;
    }

    AlgebraElement operator+(const AlgebraElement& o) const
    {
        check_same(o);
        AlgebraElement r = *this;
        for (std::size_t k = 0; k < data.size(); ++k)
            for (std::size_t i = 0; i < data[k].size(); ++i)
                for (std::size_t j = 0; j < data[k].size(); ++j) r.data[k][i][j] += o.data[k][i][j];
        return r;
    }

    AlgebraElement operator-(const AlgebraElement& o) const { return *this + o.scaled(Rational(-1)); }

    AlgebraElement operator*(const AlgebraElement& o) const
    {
        check_same(o);
        AlgebraElement r{parent, {}};
        for (std::size_t k = 0; k < data.size(); ++k) r.data.push_back(linalg::multiply(data[k], o.data[k]));
        return r;
    }

    AlgebraElement scaled(const Rational& s) const
    {
        AlgebraElement r = *this;
        for (auto& m : r.data)
            for (auto& row : m)
                for (auto& x : row) x *= s;
        return r;
    }

    bool operator==(const AlgebraElement& o) const { return parent == o.parent && data == o.data; }

    bool is_zero() const { return *this == zero(parent); }
    bool is_idempotent() const { return *this * *this == *this; }

    bool is_central() const
    {
        for (std::size_t i = 0; i < parent.total_dim(); ++i) {
            const auto e = basis(parent, i);
            if (!(e * *this == *this * e)) return false;
        }
        return true;
    }

private:
    void check_same(const AlgebraElement& o) const
    {
        detail::require(parent == o.parent, "elements of different algebras");
    }
};

/// Unit-preserving injective algebra map, given by the images of the source basis.
class AlgebraEmbedding {
public:
    static AlgebraEmbedding make(const SplitSemisimpleAlgebra& source, const SplitSemisimpleAlgebra& target,
                                 std::vector<AlgebraElement> images)
    {
        detail::require(images.size() == source.total_dim(), "embedding needs one image per source basis element");
        for (const auto& im : images) detail::require(im.parent == target, "embedding image in the wrong algebra");
        AlgebraEmbedding e;
        e.source_ = source;
        e.target_ = target;
        e.images_ = std::move(images);
        for (const auto& im : e.images_) e.matrix_.push_back(im.to_vector());
        detail::require(linalg::rank(e.matrix_, target.total_dim()) == source.total_dim(), "embedding is not injective");
        detail::require(e.apply(AlgebraElement::one(source)) == AlgebraElement::one(target),
                        "embedding does not preserve the unit");
        for (std::size_t i = 0; i < source.total_dim(); ++i)
            for (std::size_t j = 0; j < source.total_dim(); ++j) {
                const auto prod = AlgebraElement::basis(source, i) * AlgebraElement::basis(source, j);
                detail::require(e.apply(prod) == e.images_[i] * e.images_[j], "embedding is not multiplicative");
            }
        return e;
    }

    /// Target block j is P_j diag(copies of source blocks) P_j^{-1}; mult[j][k] copies of block k.
    static AlgebraEmbedding block_diagonal(const SplitSemisimpleAlgebra& source, const SplitSemisimpleAlgebra& target,
                                           const std::vector<std::vector<unsigned>>& mult,
                                           const std::vector<QMat>& conj = {})
    {
        detail::require(mult.size() == target.blocks().size(), "multiplicity table has the wrong number of rows");
        std::vector<std::optional<QMat>> inv(conj.size());
        for (std::size_t j = 0; j < conj.size(); ++j) {
            inv[j] = linalg::inverse(conj[j]);
            detail::require(inv[j].has_value(), "conjugating matrix is singular");
        }
        for (std::size_t j = 0; j < mult.size(); ++j) {
            detail::require(mult[j].size() == source.blocks().size(), "multiplicity row has the wrong length");
            unsigned size = 0;
            for (std::size_t k = 0; k < mult[j].size(); ++k) size += mult[j][k] * source.blocks()[k];
            detail::require(size == target.blocks()[j], "multiplicities do not fill target block " + std::to_string(j));
        }
        std::vector<AlgebraElement> images;
        for (std::size_t idx = 0; idx < source.total_dim(); ++idx) {
            const auto x = AlgebraElement::basis(source, idx);
            std::vector<QMat> blocks;
            for (std::size_t j = 0; j < mult.size(); ++j) {
                QMat b = linalg::zeros(target.blocks()[j], target.blocks()[j]);
                std::size_t pos = 0;
                for (std::size_t k = 0; k < mult[j].size(); ++k)
                    for (unsigned c = 0; c < mult[j][k]; ++c) {
                        const unsigned n = source.blocks()[k];
                        for (unsigned r = 0; r < n; ++r)
                            for (unsigned s = 0; s < n; ++s) b[pos + r][pos + s] = x.data[k][r][s];
                        pos += n;
                    }
                if (j < conj.size()) b = linalg::multiply(linalg::multiply(conj[j], b), *inv[j]);
                blocks.push_back(std::move(b));
            }
            images.push_back(AlgebraElement::from_blocks(target, std::move(blocks)));
        }
        return make(source, target, std::move(images));
    }

    const SplitSemisimpleAlgebra& source() const { return source_; }
    const SplitSemisimpleAlgebra& target() const { return target_; }
    const std::vector<AlgebraElement>& images() const { return images_; }
    const QMat& image_vectors() const { return matrix_; }

    AlgebraElement apply(const AlgebraElement& x) const
    {
        detail::require(x.parent == source_, "embedding applied to an element of another algebra");
        const auto v = x.to_vector();
        QVec out(target_.total_dim(), Rational(0));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            for (std::size_t r = 0; r < out.size(); ++r) out[r] += v[i] * matrix_[i][r];
        }
        return AlgebraElement::from_vector(target_, out);
    }

    /// The source element mapping to y, if any.
    std::optional<AlgebraElement> preimage(const AlgebraElement& y) const
    {
        const auto t = linalg::transpose(matrix_, target_.total_dim());
        auto c = linalg::solve(t, y.to_vector(), source_.total_dim());
        if (!c) return std::nullopt;
        return AlgebraElement::from_vector(source_, *c);
    }

private:
    SplitSemisimpleAlgebra source_, target_;
    std::vector<AlgebraElement> images_;
    QMat matrix_;  // row i = image of basis element i
};

/// Faithful unital representation on Q^space_dim.
class Representation {
public:
    static Representation make(const SplitSemisimpleAlgebra& algebra, std::size_t space_dim, std::vector<QMat> images)
    {
        detail::require(space_dim >= 1, "representation space must be non-zero");
        detail::require(images.size() == algebra.total_dim(), "representation needs one matrix per basis element");
        for (const auto& m : images) {
            detail::require(m.size() == space_dim, "representation matrix has the wrong size");
            for (const auto& row : m) detail::require(row.size() == space_dim, "representation matrix is not square");
        }
        Representation r;
        r.algebra_ = algebra;
        r.space_dim_ = space_dim;
        r.images_ = std::move(images);
        detail::require(r.apply(AlgebraElement::one(algebra)) == linalg::identity(space_dim),
                        "representation is not unital");
        QMat flat;
        for (const auto& m : r.images_) {
            QVec v;
            for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
            flat.push_back(std::move(v));
        }
        detail::require(linalg::rank(flat, space_dim * space_dim) == algebra.total_dim(),
                        "representation is not faithful");
        for (std::size_t i = 0; i < algebra.total_dim(); ++i)
            for (std::size_t j = 0; j < algebra.total_dim(); ++j) {
                const auto prod = AlgebraElement::basis(algebra, i) * AlgebraElement::basis(algebra, j);
                detail::require(r.apply(prod) == linalg::multiply(r.images_[i], r.images_[j]),
                                "representation is not multiplicative");
            }
        return r;
    }

    /// Block k acting on mult[k] >= 1 copies of Q^{n_k}, optionally conjugated by Q.
    static Representation natural(const SplitSemisimpleAlgebra& algebra, const std::vector<unsigned>& mult,
                                  const std::optional<QMat>& conj = std::nullopt)
    {
        detail::require(mult.size() == algebra.blocks().size(), "one multiplicity per block required");
        std::size_t dim = 0;
        for (std::size_t k = 0; k < mult.size(); ++k) {
            detail::require(mult[k] >= 1, "multiplicities must be >= 1 for a faithful representation");
            dim += static_cast<std::size_t>(mult[k]) * algebra.blocks()[k];
        }
        std::optional<QMat> inv;
        if (conj) {
            detail::require(conj->size() == dim, "conjugating matrix has the wrong size");
            inv = linalg::inverse(*conj);
            detail::require(inv.has_value(), "conjugating matrix is singular");
        }
        std::vector<QMat> images;
        for (std::size_t idx = 0; idx < algebra.total_dim(); ++idx) {
            const auto x = AlgebraElement::basis(algebra, idx);
            QMat m = linalg::zeros(dim, dim);
            std::size_t pos = 0;
            for (std::size_t k = 0; k < mult.size(); ++k)
                for (unsigned c = 0; c < mult[k]; ++c) {
                    const unsigned n = algebra.blocks()[k];
                    for (unsigned r = 0; r < n; ++r)
                        for (unsigned s = 0; s < n; ++s) m[pos + r][pos + s] = x.data[k][r][s];
                    pos += n;
                }
            if (conj) m = linalg::multiply(linalg::multiply(*conj, m), *inv);
            images.push_back(std::move(m));
        }
        return make(algebra, dim, std::move(images));
    }

    const SplitSemisimpleAlgebra& algebra() const { return algebra_; }
    std::size_t space_dim() const { return space_dim_; }
    const std::vector<QMat>& images() const { return images_; }

    QMat apply(const AlgebraElement& x) const
    {
        detail::require(x.parent == algebra_, "representation applied to an element of another algebra");
        const auto v = x.to_vector();
        QMat out = linalg::zeros(space_dim_, space_dim_);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            for (std::size_t r = 0; r < space_dim_; ++r)
                for (std::size_t c = 0; c < space_dim_; ++c)
                    if (images_[i][r][c] != 0) out[r][c] += v[i] * images_[i][r][c];
        }
        return out;
    }

    /// Column space of rep(x), as a list of spanning vectors.
    QMat image(const AlgebraElement& x) const { return linalg::column_space(apply(x), space_dim_); }

    /// image(x_1) + ... + image(x_k)
    QMat image_sum(const std::vector<AlgebraElement>& xs) const
    {
        QMat all;
        for (const auto& x : xs) {
            auto im = image(x);
            all.insert(all.end(), im.begin(), im.end());
        }
        return linalg::span_basis(all, space_dim_);
    }

private:
    SplitSemisimpleAlgebra algebra_;
    std::size_t space_dim_ = 0;
    std::vector<QMat> images_;
};

namespace detail {

/// Idempotent e of the (unital) subalgebra spanned by sub_basis, with e X = X and e in X, where
/// X (inside the subalgebra) must be a right ideal of it. Multiplication is that of A.
inline AlgebraElement ideal_generator_in(const SplitSemisimpleAlgebra& A, const QMat& sub_basis, const QMat& X)
{
    const std::size_t n = A.total_dim();
    const QMat xb = linalg::span_basis(X, n);
    if (xb.empty()) return AlgebraElement::zero(A);
    std::vector<AlgebraElement> xs;
    for (const auto& v : xb) xs.push_back(AlgebraElement::from_vector(A, v));
    for (const auto& x : xs)
        for (const auto& s : sub_basis)
            require(linalg::in_span(xb, (x * AlgebraElement::from_vector(A, s)).to_vector(), n),
                    "span is not a right ideal");

    // unknowns c_i with e = sum c_i x_i and e x_j = x_j for every j
    QMat sys;
    QVec rhs;
    for (const auto& xj : xs) {
        std::vector<QVec> cols;
        for (const auto& xi : xs) cols.push_back((xi * xj).to_vector());
        const auto target = xj.to_vector();
        for (std::size_t r = 0; r < n; ++r) {
            QVec row;
            for (const auto& col : cols) row.push_back(col[r]);
            sys.push_back(std::move(row));
            rhs.push_back(target[r]);
        }
    }
    const auto c = linalg::solve(sys, rhs, xs.size());
    ensure(c.has_value(), "right ideal generator system is inconsistent");
    AlgebraElement e = AlgebraElement::zero(A);
    for (std::size_t i = 0; i < xs.size(); ++i)
        if ((*c)[i] != 0) e = e + xs[i].scaled((*c)[i]);
    ensure(e.is_idempotent(), "right ideal generator is not idempotent");
    QMat eS;
    for (const auto& s : sub_basis) eS.push_back((e * AlgebraElement::from_vector(A, s)).to_vector());
    ensure(linalg::rank(eS, n) == xb.size() && linalg::span_contains(xb, eS, n), "e A differs from X");
    return e;
}

inline QMat all_basis_vectors(const SplitSemisimpleAlgebra& A) { return linalg::identity(A.total_dim()); }

} // namespace detail

/// Idempotent e with e A = span(ideal_basis).
inline AlgebraElement right_ideal_generator(const SplitSemisimpleAlgebra& A, const std::vector<AlgebraElement>& ideal_basis)
{
    QMat X;
    for (const auto& x : ideal_basis) {
        detail::require(x.parent == A, "ideal element from another algebra");
        X.push_back(x.to_vector());
    }
    return detail::ideal_generator_in(A, detail::all_basis_vectors(A), X);
}

struct LiftResult {
    AlgebraElement v;
    bool idempotent = false;
    bool lower_inclusion = false;  // image(w) in image(v)
    bool upper_inclusion = false;  // image(v) in image(u)
};

/// Idempotent v of M with image(w) in image(v) in image(u), from v M = u N cap M.
inline LiftResult lift_idempotent(const SplitSemisimpleAlgebra& M, const SplitSemisimpleAlgebra& N,
                                  const AlgebraEmbedding& emb, const Representation& rep, const AlgebraElement& u,
                                  const AlgebraElement& w)
{
    detail::require(emb.source() == M && emb.target() == N, "embedding does not match the algebras");
    detail::require(rep.algebra() == N, "representation is not of N");
    detail::require(u.parent == N && w.parent == M, "u must lie in N and w in M");
    detail::require(u.is_idempotent(), "u is not idempotent");
    const std::size_t s = rep.space_dim();
    const QMat im_u = rep.image(u);
    detail::require(linalg::span_contains(im_u, rep.image(emb.apply(w)), s),
                    "image of w is not contained in the image of u");

    QMat uN;
    for (std::size_t i = 0; i < N.total_dim(); ++i) uN.push_back((u * AlgebraElement::basis(N, i)).to_vector());
    const QMat X_N = linalg::intersect(uN, emb.image_vectors(), N.total_dim());
    QMat X_M;
    for (const auto& x : X_N) {
        const auto pre = emb.preimage(AlgebraElement::from_vector(N, x));
        detail::ensure(pre.has_value(), "intersection with M not in the image of M");
        X_M.push_back(pre->to_vector());
    }
    LiftResult out{detail::ideal_generator_in(M, detail::all_basis_vectors(M), X_M)};
    out.idempotent = out.v.is_idempotent();
    const QMat im_v = rep.image(emb.apply(out.v));
    out.lower_inclusion = linalg::span_contains(im_v, rep.image(emb.apply(w)), s);
    out.upper_inclusion = linalg::span_contains(im_u, im_v, s);
    detail::ensure(out.idempotent && out.lower_inclusion && out.upper_inclusion, "lift_idempotent: chain fails");
    return out;
}

namespace detail {

inline void require_central_idempotent(const AlgebraElement& pi)
{
    require(pi.is_idempotent(), "pi is not idempotent");
    require(pi.is_central(), "pi is not central");
}

} // namespace detail

struct MembershipResult {
    bool representation_test = false;  // image(b) in image(u) + image(pi)
    bool direct_test = false;          // b in u B + pi B
};

inline MembershipResult ideal_membership_report(const SplitSemisimpleAlgebra& B, const AlgebraElement& pi,
                                                const AlgebraElement& u, const AlgebraElement& b,
                                                const Representation& rep)
{
    detail::require(pi.parent == B && u.parent == B && b.parent == B && rep.algebra() == B,
                    "all inputs must belong to the same algebra");
    detail::require_central_idempotent(pi);
    detail::require(u.is_idempotent(), "u is not idempotent");
    MembershipResult out;
    out.representation_test = linalg::span_contains(rep.image_sum({u, pi}), rep.image(b), rep.space_dim());
    QMat ideal;
    for (std::size_t i = 0; i < B.total_dim(); ++i) {
        const auto e = AlgebraElement::basis(B, i);
        ideal.push_back((u * e).to_vector());
        ideal.push_back((pi * e).to_vector());
    }
    out.direct_test = linalg::in_span(linalg::span_basis(ideal, B.total_dim()), b.to_vector(), B.total_dim());
    detail::ensure(out.representation_test == out.direct_test, "membership tests disagree");
    return out;
}

inline bool ideal_membership_mod_pi(const SplitSemisimpleAlgebra& B, const AlgebraElement& pi, const AlgebraElement& u,
                                    const AlgebraElement& b, const Representation& rep)
{
    return ideal_membership_report(B, pi, u, b, rep).direct_test;
}

struct CentralLiftResult {
    AlgebraElement v;
    AlgebraElement m;  // generator of X_pi inside M[pi]
    AlgebraElement z;  // central idempotent of M cutting out M cap pi N
    bool idempotent = false;
    bool lower_inclusion = false;  // w V + pi V in v V + pi V
    bool upper_inclusion = false;  // v V + pi V in u V + pi V
    bool uv_equals_v_mod_pi = false;
    bool direct_sum_ok = false;    // dim I = dim pi I + dim (1 - pi) I for N and I = u N + pi N
};

/// Idempotent v of M with w V + pi V in v V + pi V in u V + pi V.
inline CentralLiftResult lift_idempotent_central(const SplitSemisimpleAlgebra& M, const SplitSemisimpleAlgebra& N,
                                                 const AlgebraEmbedding& emb, const Representation& rep,
                                                 const AlgebraElement& pi, const AlgebraElement& u,
                                                 const AlgebraElement& w)
{
    detail::require(emb.source() == M && emb.target() == N, "embedding does not match the algebras");
    detail::require(rep.algebra() == N, "representation is not of N");
    detail::require(pi.parent == N && u.parent == N && w.parent == M, "pi, u must lie in N and w in M");
    detail::require_central_idempotent(pi);
    detail::require(u.is_idempotent(), "u is not idempotent");
    detail::require(w.is_idempotent(), "w is not idempotent");
    const std::size_t s = rep.space_dim();
    const std::size_t nd = N.total_dim();
    const QMat upper = rep.image_sum({u, pi});
    const AlgebraElement ew = emb.apply(w);
    detail::require(linalg::span_contains(upper, rep.image_sum({ew, pi}), s),
                    "w V + pi V is not contained in u V + pi V");

    const AlgebraElement one_n = AlgebraElement::one(N);
    const AlgebraElement co_pi = one_n - pi;

    // M[pi] = M + pi M inside N
    QMat m_pi = emb.image_vectors();
    for (const auto& im : emb.images()) m_pi.push_back((pi * im).to_vector());
    m_pi = linalg::span_basis(m_pi, nd);

    QMat ideal;  // u N + pi N
    for (std::size_t i = 0; i < nd; ++i) {
        const auto e = AlgebraElement::basis(N, i);
        ideal.push_back((u * e).to_vector());
        ideal.push_back((pi * e).to_vector());
    }
    ideal = linalg::span_basis(ideal, nd);
    const QMat X_pi = linalg::intersect(ideal, m_pi, nd);

    CentralLiftResult out;
    out.m = detail::ideal_generator_in(N, m_pi, X_pi);

    // K = { x in M : (1 - pi) x = 0 }, a two-sided ideal of M with central idempotent z
    QMat k_sys = linalg::zeros(nd, M.total_dim());
    for (std::size_t i = 0; i < M.total_dim(); ++i) {
        const auto col = (co_pi * emb.images()[i]).to_vector();
        for (std::size_t r = 0; r < nd; ++r) k_sys[r][i] = col[r];
    }
    const QMat K = linalg::kernel(k_sys, M.total_dim());
    out.z = detail::ideal_generator_in(M, detail::all_basis_vectors(M), K);
    const AlgebraElement one_m = AlgebraElement::one(M);
    detail::ensure(out.z.is_central(), "ideal M cap pi N has a non-central generator");

    // v' in (1 - z) M with (1 - pi) v' = (1 - pi) m; unique since (1 - z) M embeds in (1 - pi) N
    const AlgebraElement co_z = one_m - out.z;
    std::vector<AlgebraElement> cz_basis;
    for (std::size_t i = 0; i < M.total_dim(); ++i) cz_basis.push_back(co_z * AlgebraElement::basis(M, i));
    QMat sys = linalg::zeros(nd, cz_basis.size());
    for (std::size_t i = 0; i < cz_basis.size(); ++i) {
        const auto col = (co_pi * emb.apply(cz_basis[i])).to_vector();
        for (std::size_t r = 0; r < nd; ++r) sys[r][i] = col[r];
    }
    const auto coeff = linalg::solve(sys, (co_pi * out.m).to_vector(), cz_basis.size());
    detail::ensure(coeff.has_value(), "idempotent modulo pi does not come from M");
    AlgebraElement v_prime = AlgebraElement::zero(M);
    for (std::size_t i = 0; i < cz_basis.size(); ++i)
        if ((*coeff)[i] != 0) v_prime = v_prime + cz_basis[i].scaled((*coeff)[i]);
    out.v = v_prime + out.z;

    const AlgebraElement ev = emb.apply(out.v);
    out.idempotent = out.v.is_idempotent();
    const QMat middle = rep.image_sum({ev, pi});
    out.lower_inclusion = linalg::span_contains(middle, rep.image_sum({ew, pi}), s);
    out.upper_inclusion = linalg::span_contains(upper, middle, s);
    out.uv_equals_v_mod_pi = (co_pi * (u * ev - ev)).is_zero();

    auto dims_split = [&](const QMat& space) {
        QMat a, b;
        for (const auto& x : space) {
            const auto e = AlgebraElement::from_vector(N, x);
            a.push_back((pi * e).to_vector());
            b.push_back((co_pi * e).to_vector());
        }
        return linalg::rank(space, nd) == linalg::rank(a, nd) + linalg::rank(b, nd);
    };
    out.direct_sum_ok = dims_split(detail::all_basis_vectors(N)) && dims_split(ideal);
    detail::ensure(out.idempotent && out.lower_inclusion && out.upper_inclusion && out.uv_equals_v_mod_pi &&
                       out.direct_sum_ok,
                   "lift_idempotent_central: chain fails");
    return out;
}

} // namespace arith_mm
