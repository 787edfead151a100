#pragma once

// Seeded generators for randomized property checks. Uses only the raw 64-bit output of
// mt19937_64 so sequences are identical across standard libraries.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "arith_mm/gl_orbit.hpp"
#include "arith_mm/rational_linalg.hpp"
#include "arith_mm/semisimple_algebra.hpp"
#include "arith_mm/torsion_model.hpp"

namespace arith_mm::random {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : gen_() % n; }

    std::int64_t range(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(unsigned percent) { return below(100) < percent; }

    /// Uniform-ish big integer in [lo, hi].
    BigInt big_range(const BigInt& lo, const BigInt& hi)
    {
        const BigInt span = hi - lo + 1;
        BigInt r = 0;
        for (std::size_t bits = 0; bits < bit_length(span) + 64; bits += 64) r = (r << 64) + gen_();
        return lo + r % span;
    }

private:
    std::mt19937_64 gen_;
};

// ---- rational matrices and algebras ----

inline QMat int_matrix(Rng& rng, std::size_t n, int lo = -3, int hi = 3)
{
    QMat m = linalg::zeros(n, n);
    for (auto& row : m)
        for (auto& x : row) x = Rational(rng.range(lo, hi));
    return m;
}

inline QMat invertible_matrix(Rng& rng, std::size_t n)
{
    for (;;) {
        QMat m = int_matrix(rng, n);
        if (linalg::rank(m, n) == n) return m;
    }
}

/// P diag(1,...,1,0,...,0) P^{-1} from the columns of P, the first r of them spanning the image.
inline QMat projection(const QMat& P, std::size_t r)
{
    const std::size_t n = P.size();
    QMat d = linalg::zeros(n, n);
    for (std::size_t i = 0; i < r; ++i) d[i][i] = 1;
    return linalg::multiply(linalg::multiply(P, d), *linalg::inverse(P));
}

inline AlgebraElement random_idempotent(Rng& rng, const SplitSemisimpleAlgebra& A)
{
    std::vector<QMat> blocks;
    for (auto n : A.blocks()) blocks.push_back(projection(invertible_matrix(rng, n), rng.below(n + 1)));
    return AlgebraElement::from_blocks(A, std::move(blocks));
}

inline AlgebraElement random_element(Rng& rng, const SplitSemisimpleAlgebra& A)
{
    std::vector<QMat> blocks;
    for (auto n : A.blocks()) blocks.push_back(int_matrix(rng, n));
    return AlgebraElement::from_blocks(A, std::move(blocks));
}

inline AlgebraElement random_central_idempotent(Rng& rng, const SplitSemisimpleAlgebra& A)
{
    std::vector<QMat> blocks;
    for (auto n : A.blocks()) blocks.push_back(rng.chance(50) ? linalg::identity(n) : linalg::zeros(n, n));
    return AlgebraElement::from_blocks(A, std::move(blocks));
}

inline Representation random_representation(Rng& rng, const SplitSemisimpleAlgebra& A, std::size_t max_dim = 6)
{
    std::vector<unsigned> mult(A.blocks().size(), 1);
    std::size_t dim = 0;
    for (auto n : A.blocks()) dim += n;
    for (std::size_t k = 0; k < mult.size(); ++k)
        if (dim + A.blocks()[k] <= max_dim && rng.chance(30)) {
            ++mult[k];
            dim += A.blocks()[k];
        }
    std::optional<QMat> conj;
    if (rng.chance(70)) conj = invertible_matrix(rng, dim);
    return Representation::natural(A, mult, conj);
}

struct LiftInstance {
    SplitSemisimpleAlgebra M, N;
    AlgebraEmbedding emb;
    Representation rep;
    AlgebraElement u;   // idempotent of N
    AlgebraElement e0;  // idempotent of M with u emb(e0) = emb(e0)
    AlgebraElement w;   // element of M with u emb(w) = emb(w)
};

/// M with 1-2 blocks of size <= 2, N with 1-2 blocks of size <= 3 receiving copies of the M blocks,
/// each target block conjugated by a random invertible matrix; u projects onto the image of
/// emb(e0) plus random directions.
inline LiftInstance random_lift_instance(Rng& rng)
{
    for (;;) {
        std::vector<unsigned> mb;
        const std::size_t mk = 1 + rng.below(2);
        for (std::size_t k = 0; k < mk; ++k) mb.push_back(static_cast<unsigned>(1 + rng.below(2)));
        std::vector<std::vector<unsigned>> mult;
        std::vector<unsigned> nb;
        const std::size_t nk = 1 + rng.below(2);
        for (std::size_t j = 0; j < nk; ++j) {
            std::vector<unsigned> row(mk, 0);
            unsigned size = 0;
            for (int tries = 0; tries < 4; ++tries) {
                const std::size_t k = rng.below(mk);
                if (size + mb[k] > 3) continue;
                if (size > 0 && rng.chance(40)) break;
                ++row[k];
                size += mb[k];
            }
            if (size == 0) {
                row[0] = 1;
                size = mb[0];
            }
            nb.push_back(size);
            mult.push_back(row);
        }
        bool covered = true;
        for (std::size_t k = 0; k < mk; ++k) {
            unsigned total = 0;
            for (const auto& row : mult) total += row[k];
            covered = covered && total > 0;
        }
        if (!covered) continue;

        SplitSemisimpleAlgebra M(mb), N(nb);
        std::vector<QMat> conj;
        for (auto n : nb) conj.push_back(invertible_matrix(rng, n));
        auto emb = AlgebraEmbedding::block_diagonal(M, N, mult, conj);
        auto rep = random_representation(rng, N);
        const auto e0 = random_idempotent(rng, M);
        const auto ee = emb.apply(e0);

        std::vector<QMat> ublocks;
        for (std::size_t j = 0; j < nb.size(); ++j) {
            const std::size_t n = nb[j];
            QMat cols = linalg::column_space(ee.data[j], n);  // image of emb(e0) in block j
            const std::size_t image_dim = cols.size() + rng.below(n - cols.size() + 1);
            for (int tries = 0; cols.size() < n && tries < 50; ++tries) {
                QVec v(n);
                for (auto& x : v) x = Rational(rng.range(-3, 3));
                QMat trial = cols;
                trial.push_back(v);
                if (linalg::rank(trial, n) == trial.size()) cols = std::move(trial);
            }
            for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
                QVec v(n, Rational(0));
                v[i] = 1;
                QMat trial = cols;
                trial.push_back(v);
                if (linalg::rank(trial, n) == trial.size()) cols = std::move(trial);
            }
            const QMat P = linalg::transpose(cols, n);
            ublocks.push_back(projection(P, image_dim));
        }
        const auto u = AlgebraElement::from_blocks(N, std::move(ublocks));

        // w: a random element of { m : u emb(m) = emb(m) }
        const std::size_t md = M.total_dim(), nd = N.total_dim();
        QMat sys = linalg::zeros(nd, md);
        for (std::size_t i = 0; i < md; ++i) {
            const auto im = emb.images()[i];
            const auto col = (u * im - im).to_vector();
            for (std::size_t r = 0; r < nd; ++r) sys[r][i] = col[r];
        }
        AlgebraElement w = AlgebraElement::zero(M);
        for (const auto& kv : linalg::kernel(sys, md))
            w = w + AlgebraElement::from_vector(M, kv).scaled(Rational(rng.range(-3, 3)));
        return {M, N, emb, rep, u, e0, w};
    }
}

// ---- matrix groups ----

inline FMatrix random_invertible_fmatrix(Rng& rng, const FiniteSpace& space)
{
    for (;;) {
        FMatrix m(space.dim * space.dim);
        for (auto& x : m) x = static_cast<std::uint32_t>(rng.below(space.ell));
        if (space.invertible(m)) return m;
    }
}

/// Generators of assorted shapes: random, diagonal, permutation-like, unipotent, scalar.
inline std::vector<FMatrix> random_generators(Rng& rng, const FiniteSpace& space)
{
    const unsigned n = space.dim;
    std::vector<FMatrix> gens;
    const std::size_t count = 1 + rng.below(2);
    for (std::size_t c = 0; c < count; ++c) {
        FMatrix m = space.identity();
        switch (rng.below(5)) {
        case 0:
            m = random_invertible_fmatrix(rng, space);
            break;
        case 1:
            for (unsigned i = 0; i < n; ++i) m[i * n + i] = static_cast<std::uint32_t>(1 + rng.below(space.ell - 1));
            break;
        case 2: {
            std::vector<unsigned> perm(n);
            for (unsigned i = 0; i < n; ++i) perm[i] = i;
            for (unsigned i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
            m.assign(n * n, 0);
            for (unsigned i = 0; i < n; ++i) m[i * n + perm[i]] = 1;
            break;
        }
        case 3:
            for (unsigned i = 0; i < n; ++i)
                for (unsigned j = i + 1; j < n; ++j) m[i * n + j] = static_cast<std::uint32_t>(rng.below(space.ell));
            break;
        default: {
            const auto s = static_cast<std::uint32_t>(1 + rng.below(space.ell - 1));
            for (unsigned i = 0; i < n; ++i) m[i * n + i] = s;
        }
        }
        gens.push_back(std::move(m));
    }
    return gens;
}

// ---- torsion model ----

/// A uniformly random point of the ambient group.
inline Point random_point(Rng& rng, const ModelAmbient& amb)
{
    Point p(amb.rank());
    for (auto& x : p) x = rng.below(amb.N);
    return p;
}

} // namespace arith_mm::random
