#pragma once

// Integer lattice support for the invariant ("monomer") basis: the kernel
// of the weight functional over the amplitude exponent lattice. Candidates
// are generated pairwise from the characteristic equations, then reduced by
// dropping any element expressible as an integer combination of the others.

#include "ampforge/monomial.hpp"
#include "ampforge/symbols.hpp"

#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ampforge {

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;

// Row-style Hermite reduction; returns (H, U) with H = U * B, U unimodular.
// H's nonzero rows come first, each with a positive pivot strictly to the
// right of the previous row's pivot.
inline std::pair<IntMat, IntMat> hermite_form(IntMat B) {
    size_t rows = B.size(), cols = rows ? B[0].size() : 0;
    IntMat U(rows, IntVec(rows, 0));
    for (size_t i = 0; i < rows; ++i) U[i][i] = 1;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // gcd-eliminate column c below row r
        while (true) {
            size_t piv = rows;
            for (size_t i = r; i < rows; ++i)
                if (B[i][c] != 0 && (piv == rows || std::llabs(B[i][c]) < std::llabs(B[piv][c]))) piv = i;
            if (piv == rows) break;
            std::swap(B[r], B[piv]);
            std::swap(U[r], U[piv]);
            bool done = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (B[i][c] == 0) continue;
                long long f = B[i][c] / B[r][c];
                for (size_t j = 0; j < cols; ++j) B[i][j] -= f * B[r][j];
                for (size_t j = 0; j < rows; ++j) U[i][j] -= f * U[r][j];
                if (B[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (B[r][c] == 0) continue;
        if (B[r][c] < 0) {
            for (size_t j = 0; j < cols; ++j) B[r][j] = -B[r][j];
            for (size_t j = 0; j < rows; ++j) U[r][j] = -U[r][j];
        }
        // reduce rows above
        for (size_t i = 0; i < r; ++i) {
            long long f = (B[i][c] >= 0 ? B[i][c] : B[i][c] - (B[r][c] - 1)) / B[r][c];
            if (f == 0) continue;
            for (size_t j = 0; j < cols; ++j) B[i][j] -= f * B[r][j];
            for (size_t j = 0; j < rows; ++j) U[i][j] -= f * U[r][j];
        }
        ++r;
    }
    return {std::move(B), std::move(U)};
}

inline size_t lattice_rank(const IntMat& gens) {
    if (gens.empty()) return 0;
    auto [H, U] = hermite_form(gens);
    size_t r = 0;
    for (const IntVec& row : H) {
        bool nz = false;
        for (long long v : row) nz = nz || v != 0;
        if (nz) ++r;
    }
    return r;
}

// Integer solution x with x * gens == target, if one exists.
inline std::optional<IntVec> lattice_solve(const IntMat& gens, const IntVec& target) {
    if (gens.empty()) {
        for (long long v : target)
            if (v != 0) return std::nullopt;
        return IntVec{};
    }
    auto [H, U] = hermite_form(gens);
    size_t rows = gens.size(), cols = gens[0].size();
    IntVec v = target, y(rows, 0);
    for (size_t i = 0; i < rows; ++i) {
        size_t c = 0;
        while (c < cols && H[i][c] == 0) ++c;
        if (c == cols) break;
        if (v[c] % H[i][c] != 0) return std::nullopt;
        long long f = v[c] / H[i][c];
        y[i] = f;
        for (size_t j = 0; j < cols; ++j) v[j] -= f * H[i][j];
    }
    for (long long r : v)
        if (r != 0) return std::nullopt;
    IntVec x(rows, 0);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < rows; ++j) x[j] += y[i] * U[i][j];
    return x;
}

inline bool lattice_member(const IntMat& gens, const IntVec& target) {
    return lattice_solve(gens, target).has_value();
}

// ---- monomial <-> exponent vector over the amplitude symbols ----
// coordinates: (p_0, q_0, p_1, q_1, ...) for amplitude ids 0..m-1

inline IntVec monomial_to_vector(const Monomial& m, int n_amps) {
    IntVec v(size_t(2 * n_amps), 0);
    for (const Monomial::Entry& e : m.exps) {
        if (e.sym >= n_amps) throw std::invalid_argument("non-amplitude symbol in lattice monomial");
        v[size_t(2 * e.sym)] = e.p;
        v[size_t(2 * e.sym) + 1] = e.q;
    }
    return v;
}

inline Monomial vector_to_monomial(const IntVec& v) {
    Monomial m;
    for (size_t j = 0; j + 1 < v.size(); j += 2)
        m.set_powers(int(j / 2), int(v[j]), int(v[j + 1]));
    return m;
}

struct InvariantBasis {
    std::vector<Monomial> monomers;  // irreducible generating set, weight 0
    IntMat vectors;                  // exponent coordinates of the monomers
    int n_amps = 0;

    bool member(const Monomial& m) const { return lattice_member(vectors, monomial_to_vector(m, n_amps)); }
    std::optional<IntVec> factor(const Monomial& m) const {
        return lattice_solve(vectors, monomial_to_vector(m, n_amps));
    }
};

// Pairwise monomer candidates in sweep order dA, dA*, dB, dB*, ...  Each
// pair (X, Y) of distinct signed symbols contributes X^{L/kX} Y^{-L/kY}
// with L = lcm(|kX|, |kY|); a candidate whose first nonzero exponent is
// negative is replaced by its inverse.
inline std::vector<IntVec> monomer_candidates(const std::vector<int>& multipliers) {
    int m = int(multipliers.size());
    std::vector<long long> k(size_t(2 * m));
    for (int j = 0; j < m; ++j) {
        k[size_t(2 * j)] = multipliers[size_t(j)];
        k[size_t(2 * j) + 1] = -multipliers[size_t(j)];
    }
    auto lcm = [](long long a, long long b) { return a / std::gcd(a, b) * b; };
    std::vector<IntVec> out;
    for (int x = 0; x < 2 * m; ++x) {
        for (int y = 0; y < 2 * m; ++y) {
            if (y == x) continue;
            long long L = lcm(std::llabs(k[size_t(x)]), std::llabs(k[size_t(y)]));
            IntVec v(size_t(2 * m), 0);
            v[size_t(x)] = L / k[size_t(x)];
            v[size_t(y)] = -L / k[size_t(y)];
            for (long long& e : v)
                if (e != 0) {
                    if (e < 0)
                        for (long long& w : v) w = -w;
                    break;
                }
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
        }
    }
    return out;
}

// Drop-if-expressible reduction of a candidate list (repeated passes until
// stable), preserving first-listed survivors.
inline std::vector<IntVec> reduce_monomer_list(std::vector<IntVec> list) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < list.size(); ++i) {
            IntMat rest;
            for (size_t j = 0; j < list.size(); ++j)
                if (j != i) rest.push_back(list[j]);
            if (lattice_member(rest, list[i])) {
                list.erase(list.begin() + long(i));
                changed = true;
                break;
            }
        }
    }
    return list;
}

inline InvariantBasis invariant_basis(const SymbolTable& tab) {
    int m = tab.n_amplitudes();
    if (m < 1) throw std::invalid_argument("invariant basis needs at least one amplitude");
    std::vector<int> mult;
    for (int j = 0; j < m; ++j) mult.push_back(tab.at(j).k);
    auto cands = monomer_candidates(mult);
    auto reduced = reduce_monomer_list(cands);
    // irreducibility and rank checks
    size_t want_rank = size_t(2 * m - 1);
    if (lattice_rank(reduced) != want_rank) throw std::logic_error("invariant basis rank mismatch");
    for (size_t i = 0; i < reduced.size(); ++i) {
        IntMat rest;
        for (size_t j = 0; j < reduced.size(); ++j)
            if (j != i) rest.push_back(reduced[j]);
        if (lattice_member(rest, reduced[i])) throw std::logic_error("invariant basis not irreducible");
    }
    InvariantBasis b;
    b.n_amps = m;
    b.vectors = std::move(reduced);
    for (const IntVec& v : b.vectors) b.monomers.push_back(vector_to_monomial(v));
    return b;
}

}  // namespace ampforge
