#pragma once

// Small dense linear solves over the coefficient field. Row reduction with
// free variables set to zero is the canonical particular-solution choice in
// the resonant ansatz solves.

#include "ampforge/coeff.hpp"

#include <optional>
#include <vector>

namespace ampforge {

template <class C>
struct RrefResult {
    std::vector<C> x;
    bool consistent = true;
    std::vector<size_t> free_cols;  // non-pivot columns (their x entries are 0)
};

template <class C>
double pivot_size(const C& c) {
    if constexpr (coeff_traits<C>::exact) return c.is_zero() ? 0.0 : 1.0;
    else return std::abs(c.to_complex());
}

// Solve A x = b, A given as rows; free variables zero.
template <class C>
RrefResult<C> solve_rref(std::vector<std::vector<C>> A, std::vector<C> b) {
    size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    RrefResult<C> out;
    out.x.assign(cols, C());
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        double best = 0;
        for (size_t i = r; i < rows; ++i) {
            double s = pivot_size(A[i][c]);
            if (s > best) {
                best = s;
                piv = i;
            }
        }
        if constexpr (!coeff_traits<C>::exact) {
            if (best < 1e-12) piv = rows;
        }
        if (piv == rows) {
            out.free_cols.push_back(c);
            continue;
        }
        std::swap(A[r], A[piv]);
        std::swap(b[r], b[piv]);
        C inv = C(1) / A[r][c];
        for (size_t j = c; j < cols; ++j) A[r][j] = A[r][j] * inv;
        b[r] = b[r] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            C f = A[i][c];
            for (size_t j = c; j < cols; ++j) A[i][j] = A[i][j] - f * A[r][j];
            b[i] = b[i] - f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i) {
        if constexpr (coeff_traits<C>::exact) {
            if (!b[i].is_zero()) out.consistent = false;
        } else {
            if (std::abs(b[i].to_complex()) > 1e-9) out.consistent = false;
        }
    }
    for (size_t i = 0; i < pivot_col.size(); ++i) out.x[pivot_col[i]] = b[i];
    return out;
}

// Inverse of a small matrix (throws if singular).
template <class C>
std::vector<std::vector<C>> invert(std::vector<std::vector<C>> A) {
    size_t n = A.size();
    std::vector<std::vector<C>> I(n, std::vector<C>(n, C()));
    for (size_t i = 0; i < n; ++i) I[i][i] = C(1);
    for (size_t c = 0; c < n; ++c) {
        size_t piv = n;
        double best = 0;
        for (size_t i = c; i < n; ++i) {
            double s = pivot_size(A[i][c]);
            if (s > best) {
                best = s;
                piv = i;
            }
        }
        if (piv == n || (!coeff_traits<C>::exact && best < 1e-13))
            throw std::domain_error("singular matrix");
        std::swap(A[c], A[piv]);
        std::swap(I[c], I[piv]);
        C inv = C(1) / A[c][c];
        for (size_t j = 0; j < n; ++j) {
            A[c][j] = A[c][j] * inv;
            I[c][j] = I[c][j] * inv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == c || A[i][c].is_zero()) continue;
            C f = A[i][c];
            for (size_t j = 0; j < n; ++j) {
                A[i][j] = A[i][j] - f * A[c][j];
                I[i][j] = I[i][j] - f * I[c][j];
            }
        }
    }
    return I;
}

}  // namespace ampforge
