#pragma once

// Epsilon-graded series of expressions, truncated at a fixed order. The
// expression kernel itself is epsilon-free; the grading lives here (and in
// the per-order structures of the hierarchy and amplitude systems).

#include "ampforge/symexpr.hpp"

#include <vector>

namespace ampforge {

template <class C>
struct Graded {
    SymbolTablePtr tab;
    std::vector<SymExpr<C>> ords;  // ords[n] multiplies eps^n

    Graded() = default;
    Graded(SymbolTablePtr t, int n_orders) : tab(std::move(t)), ords(size_t(n_orders), SymExpr<C>(tab)) {}

    int n_orders() const { return int(ords.size()); }
    const SymExpr<C>& at(int n) const { return ords.at(size_t(n)); }
    SymExpr<C>& at(int n) { return ords.at(size_t(n)); }

    bool is_zero() const {
        for (const auto& e : ords)
            if (!e.is_zero()) return false;
        return true;
    }

    static Graded of(SymExpr<C> e, int order, int n_orders) {
        Graded g(e.table(), n_orders);
        if (order < n_orders) g.ords[size_t(order)] = std::move(e);
        return g;
    }

    friend Graded operator+(const Graded& a, const Graded& b) {
        Graded out(a.tab ? a.tab : b.tab, std::max(a.n_orders(), b.n_orders()));
        for (int n = 0; n < out.n_orders(); ++n) {
            if (n < a.n_orders()) out.ords[size_t(n)] = out.ords[size_t(n)] + a.ords[size_t(n)];
            if (n < b.n_orders()) out.ords[size_t(n)] = out.ords[size_t(n)] + b.ords[size_t(n)];
        }
        return out;
    }
    friend Graded operator-(const Graded& a, const Graded& b) { return a + (-b); }
    Graded operator-() const {
        Graded out = *this;
        for (auto& e : out.ords) e = -e;
        return out;
    }

    // product truncated at n_orders of the inputs' max
    static Graded mul(const Graded& a, const Graded& b, int n_orders) {
        Graded out(a.tab ? a.tab : b.tab, n_orders);
        for (int i = 0; i < a.n_orders() && i < n_orders; ++i) {
            if (a.ords[size_t(i)].is_zero()) continue;
            for (int j = 0; j < b.n_orders() && i + j < n_orders; ++j) {
                if (b.ords[size_t(j)].is_zero()) continue;
                out.ords[size_t(i + j)] = out.ords[size_t(i + j)] + a.ords[size_t(i)] * b.ords[size_t(j)];
            }
        }
        return out;
    }

    Graded conjugate() const {
        Graded out = *this;
        for (auto& e : out.ords) e = e.conjugate();
        return out;
    }

    Graded substitute(const std::map<int, SymExpr<C>>& bindings) const {
        Graded out = *this;
        for (auto& e : out.ords) e = e.substitute(bindings);
        return out;
    }

    Graded component(int c) const {
        Graded out = *this;
        for (auto& e : out.ords) e = e.component(c);
        return out;
    }

    friend bool operator==(const Graded& a, const Graded& b) {
        int n = std::max(a.n_orders(), b.n_orders());
        for (int i = 0; i < n; ++i) {
            bool az = i >= a.n_orders() || a.ords[size_t(i)].is_zero();
            bool bz = i >= b.n_orders() || b.ords[size_t(i)].is_zero();
            if (az != bz) return false;
            if (!az && !(a.ords[size_t(i)] == b.ords[size_t(i)])) return false;
        }
        return true;
    }
};

}  // namespace ampforge
