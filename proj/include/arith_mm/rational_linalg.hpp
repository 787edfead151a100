#pragma once

// Exact linear algebra over Q: row reduction, kernels, particular solutions, spans.

#include <cstddef>
#include <optional>
#include <vector>

#include "arith_mm/errors.hpp"
#include "arith_mm/number_types.hpp"

namespace arith_mm::linalg {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;  // list of rows

struct Echelon {
    QMat rows;                       // reduced, non-zero rows only
    std::vector<std::size_t> pivots; // pivot column of each row
};

inline Echelon rref(QMat m, std::size_t ncols)
{
    Echelon out;
    std::size_t r = 0;
    for (std::size_t col = 0; col < ncols && r < m.size(); ++col) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        const Rational inv = Rational(1) / m[r][col];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][col] == 0) continue;
            const Rational f = m[i][col];
            for (std::size_t j = col; j < ncols; ++j) m[i][j] -= f * m[r][j];
        }
        out.pivots.push_back(col);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

inline std::size_t rank(const QMat& m, std::size_t ncols) { return rref(m, ncols).rows.size(); }

/// Basis of { x : A x = 0 } for A with ncols columns.
inline QMat kernel(const QMat& a, std::size_t ncols)
{
    const auto e = rref(a, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    QMat out;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        QVec x(ncols, Rational(0));
        x[f] = 1;
        for (std::size_t i = 0; i < e.rows.size(); ++i) x[e.pivots[i]] = -e.rows[i][f];
        out.push_back(std::move(x));
    }
    return out;
}

/// A solution of A x = b with every free variable set to zero, or nothing if inconsistent.
inline std::optional<QVec> solve(const QMat& a, const QVec& b, std::size_t ncols)
{
    detail::require(a.size() == b.size(), "solve: row count mismatch");
    QMat aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    const auto e = rref(std::move(aug), ncols + 1);
    QVec x(ncols, Rational(0));
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        if (e.pivots[i] == ncols) return std::nullopt;
        x[e.pivots[i]] = e.rows[i][ncols];
    }
    return x;
}

/// Reduced basis of the span of the given vectors.
inline QMat span_basis(const QMat& vectors, std::size_t n) { return rref(vectors, n).rows; }

inline bool in_span(const QMat& basis, const QVec& v, std::size_t n)
{
    QMat m = basis;
    const std::size_t r = rank(m, n);
    m.push_back(v);
    return rank(m, n) == r;
}

/// Every vector of a lies in span(b).
inline bool span_contains(const QMat& b, const QMat& a, std::size_t n)
{
    const std::size_t r = rank(b, n);
    QMat m = b;
    m.insert(m.end(), a.begin(), a.end());
    return rank(m, n) == r;
}

/// Reduced basis of span(u) intersected with span(w).
inline QMat intersect(const QMat& u, const QMat& w, std::size_t n)
{
    const QMat ub = span_basis(u, n), wb = span_basis(w, n);
    if (ub.empty() || wb.empty()) return {};
    // sum a_i u_i - sum b_j w_j = 0, unknowns (a, b)
    const std::size_t k = ub.size() + wb.size();
    QMat sys(n, QVec(k, Rational(0)));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < ub.size(); ++i) sys[r][i] = ub[i][r];
        for (std::size_t j = 0; j < wb.size(); ++j) sys[r][ub.size() + j] = -wb[j][r];
    }
    QMat vecs;
    for (const auto& sol : kernel(sys, k)) {
        QVec v(n, Rational(0));
        for (std::size_t i = 0; i < ub.size(); ++i)
            if (sol[i] != 0)
                for (std::size_t r = 0; r < n; ++r) v[r] += sol[i] * ub[i][r];
        vecs.push_back(std::move(v));
    }
    return span_basis(vecs, n);
}

// square matrices

inline QMat identity(std::size_t n)
{
    QMat m(n, QVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline QMat zeros(std::size_t r, std::size_t c) { return QMat(r, QVec(c, Rational(0))); }

inline QMat multiply(const QMat& a, const QMat& b)
{
    const std::size_t r = a.size(), inner = b.size(), c = b.empty() ? 0 : b.front().size();
    QMat out = zeros(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline QMat transpose(const QMat& a, std::size_t ncols)
{
    QMat t = zeros(ncols, a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < ncols; ++j) t[j][i] = a[i][j];
    return t;
}

/// Reduced basis of the column space of a (rows x ncols).
inline QMat column_space(const QMat& a, std::size_t ncols) { return span_basis(transpose(a, ncols), a.size()); }

inline std::optional<QMat> inverse(const QMat& a)
{
    const std::size_t n = a.size();
    QMat aug = a;
    for (std::size_t i = 0; i < n; ++i) {
        aug[i].resize(2 * n, Rational(0));
        aug[i][n + i] = 1;
    }
    const auto e = rref(std::move(aug), 2 * n);
    if (e.rows.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    QMat inv = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
    return inv;
}

} // namespace arith_mm::linalg
