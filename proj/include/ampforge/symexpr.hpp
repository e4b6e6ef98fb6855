#pragma once

// Canonical sums of   c * t^m * e^{i k w t} * monomial * (component tag).
// This ring hosts every symbolic stage: naive-order solutions, renormalized
// solutions, amplitude equations, free functions. Expressions are immutable
// after normalization; all operations are pure.

#include "ampforge/coeff.hpp"
#include "ampforge/monomial.hpp"
#include "ampforge/symbols.hpp"

#include <algorithm>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace ampforge {

template <class C>
struct Term {
    C coeff{};
    int m = 0;     // power of t
    int k = 0;     // oscillator: multiplier of e^{i k w t}
    int comp = 0;  // component index for vector-valued expressions
    Monomial mono;

    std::tuple<int, int, int, const Monomial&> key() const { return {comp, k, m, mono}; }
};

template <class C>
class SymExpr {
public:
    SymExpr() = default;
    explicit SymExpr(SymbolTablePtr tab) : tab_(std::move(tab)) {}

    static SymExpr zero(SymbolTablePtr tab) { return SymExpr(std::move(tab)); }

    static SymExpr term(SymbolTablePtr tab, C coeff, Monomial mono, int k = 0, int m = 0, int comp = 0) {
        SymExpr e(std::move(tab));
        e.terms_.push_back({std::move(coeff), m, k, comp, std::move(mono)});
        e.normalize();
        return e;
    }
    static SymExpr constant(SymbolTablePtr tab, C coeff) {
        return term(std::move(tab), std::move(coeff), Monomial::one());
    }
    static SymExpr symbol(SymbolTablePtr tab, int sym, bool conjugated = false) {
        return term(std::move(tab), C(1), Monomial::power(sym, conjugated ? 0 : 1, conjugated ? 1 : 0));
    }

    const std::vector<Term<C>>& terms() const { return terms_; }
    const SymbolTablePtr& table() const { return tab_; }
    bool is_zero() const { return terms_.empty(); }
    int n_terms() const { return int(terms_.size()); }

    void push_raw(Term<C> t) { terms_.push_back(std::move(t)); }

    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term<C>& a, const Term<C>& b) { return a.key() < b.key(); });
        std::vector<Term<C>> out;
        out.reserve(terms_.size());
        for (Term<C>& t : terms_) {
            if (!out.empty() && out.back().key() == t.key()) out.back().coeff += t.coeff;
            else out.push_back(std::move(t));
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Term<C>& t) { return t.coeff.is_zero(); }), out.end());
        terms_ = std::move(out);
    }

    friend SymExpr operator+(const SymExpr& a, const SymExpr& b) {
        check_tables(a, b);
        SymExpr out(a.tab_ ? a.tab_ : b.tab_);
        out.terms_ = a.terms_;
        out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
        out.normalize();
        return out;
    }
    friend SymExpr operator-(const SymExpr& a, const SymExpr& b) { return a + (-b); }
    SymExpr operator-() const {
        SymExpr out = *this;
        for (Term<C>& t : out.terms_) t.coeff = -t.coeff;
        return out;
    }
    friend SymExpr operator*(const SymExpr& a, const SymExpr& b) {
        check_tables(a, b);
        if (a.is_zero() || b.is_zero()) return SymExpr(a.tab_ ? a.tab_ : b.tab_);
        bool a_scalar = a.all_component_zero(), b_scalar = b.all_component_zero();
        if (!a_scalar && !b_scalar)
            throw std::invalid_argument("product of two vector-valued expressions");
        SymExpr out(a.tab_ ? a.tab_ : b.tab_);
        out.terms_.reserve(a.terms_.size() * b.terms_.size());
        for (const Term<C>& ta : a.terms_)
            for (const Term<C>& tb : b.terms_) {
                Term<C> t;
                t.coeff = ta.coeff * tb.coeff;
                t.m = ta.m + tb.m;
                t.k = ta.k + tb.k;
                t.comp = ta.comp + tb.comp;  // at most one is nonzero
                t.mono = ta.mono.times(tb.mono);
                out.terms_.push_back(std::move(t));
            }
        out.normalize();
        return out;
    }
    SymExpr scaled(const C& c) const {
        SymExpr out = *this;
        for (Term<C>& t : out.terms_) t.coeff = t.coeff * c;
        out.normalize();
        return out;
    }

    friend bool operator==(const SymExpr& a, const SymExpr& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i) {
            const Term<C>&x = a.terms_[i], &y = b.terms_[i];
            if (x.key() != y.key() || !(x.coeff == y.coeff)) return false;
        }
        return true;
    }

    bool all_component_zero() const {
        for (const Term<C>& t : terms_)
            if (t.comp != 0) return false;
        return true;
    }
    int n_components() const {
        int n = 0;
        for (const Term<C>& t : terms_) n = std::max(n, t.comp + 1);
        return n;
    }
    SymExpr component(int c) const {
        SymExpr out(tab_);
        for (const Term<C>& t : terms_)
            if (t.comp == c) {
                Term<C> s = t;
                s.comp = 0;
                out.terms_.push_back(std::move(s));
            }
        return out;  // already sorted
    }
    SymExpr with_component(int c) const {
        SymExpr out = *this;
        for (Term<C>& t : out.terms_) {
            if (t.comp != 0) throw std::invalid_argument("with_component on vector expression");
            t.comp = c;
        }
        out.normalize();
        return out;
    }

    // d/dt with amplitudes, functions and constants t-constant:
    // per term  m t^{m-1} e^{ikwt} + i k w t^m e^{ikwt}
    SymExpr dt_derivative(const typename coeff_traits<C>::real_type& omega) const {
        SymExpr out(tab_);
        C iw = C::i() * coeff_traits<C>::from_real(omega);
        for (const Term<C>& t : terms_) {
            if (t.m > 0) {
                Term<C> a = t;
                a.m -= 1;
                a.coeff = t.coeff * C(t.m);
                out.terms_.push_back(std::move(a));
            }
            if (t.k != 0) {
                Term<C> b = t;
                b.coeff = t.coeff * iw * C(t.k);
                out.terms_.push_back(std::move(b));
            }
        }
        out.normalize();
        return out;
    }

    // formal partial d/d(sym) (wrt_conj = false) or d/d(conj sym);
    // d/dA (A^p) = p A^{p-1} for any integer p, d/dA Log(A) = A^{-1}
    SymExpr amp_derivative(int sym, bool wrt_conj = false) const {
        SymExpr out(tab_);
        for (const Term<C>& t : terms_) {
            auto [p, q] = t.mono.powers(sym);
            int pw = wrt_conj ? q : p;
            if (pw != 0) {
                Term<C> a = t;
                a.coeff = t.coeff * C(pw);
                a.mono.set_powers(sym, wrt_conj ? p : p - 1, wrt_conj ? q - 1 : q);
                out.terms_.push_back(std::move(a));
            }
            for (const Monomial::LogEntry& le : t.mono.logs) {
                if (le.sym != sym) continue;
                int lw = wrt_conj ? le.s : le.r;
                if (lw == 0) continue;
                Term<C> a = t;
                a.coeff = t.coeff * C(lw);
                a.mono.add_log(sym, wrt_conj ? 0 : -1, wrt_conj ? -1 : 0);
                auto [pp, qq] = a.mono.powers(sym);
                a.mono.set_powers(sym, wrt_conj ? pp : pp - 1, wrt_conj ? qq - 1 : qq);
                out.terms_.push_back(std::move(a));
            }
        }
        out.normalize();
        return out;
    }

    SymExpr conjugate() const {
        SymExpr out(tab_);
        out.terms_.reserve(terms_.size());
        for (const Term<C>& t : terms_) {
            Term<C> a;
            a.coeff = t.coeff.conj();
            a.m = t.m;
            a.k = -t.k;
            a.comp = t.comp;
            a.mono = t.mono.conj();
            out.terms_.push_back(std::move(a));
        }
        out.normalize();
        return out;
    }

    // Simultaneous substitution sym -> expression (the binding gives the
    // unconjugated symbol; conjugated occurrences receive the conjugate).
    // Integer powers >= 0 expand multiplicatively; negative powers of a
    // bound symbol and Log factors on a bound symbol are rejected.
    SymExpr substitute(const std::map<int, SymExpr>& bindings) const {
        if (bindings.empty()) return *this;
        SymExpr out(tab_);
        std::map<int, SymExpr> conj_cache;
        for (const Term<C>& t : terms_) {
            SymExpr piece(tab_);
            Term<C> base = t;
            std::vector<std::pair<const SymExpr*, int>> factors;
            for (const Monomial::Entry& e : t.mono.exps) {
                auto it = bindings.find(e.sym);
                if (it == bindings.end()) continue;
                if (e.p < 0 || e.q < 0)
                    throw std::invalid_argument("substitution into negative power of " + tab_->at(e.sym).name);
                if (e.p > 0) factors.push_back({&it->second, e.p});
                if (e.q > 0) {
                    auto cit = conj_cache.find(e.sym);
                    if (cit == conj_cache.end())
                        cit = conj_cache.emplace(e.sym, it->second.conjugate()).first;
                    factors.push_back({&cit->second, e.q});
                }
                base.mono.set_powers(e.sym, 0, 0);
            }
            for (const Monomial::LogEntry& le : t.mono.logs)
                if (bindings.count(le.sym))
                    throw std::invalid_argument("substitution into Log argument " + tab_->at(le.sym).name);
            piece.terms_.push_back(std::move(base));
            piece.normalize();
            for (auto& [expr, pw] : factors)
                for (int i = 0; i < pw; ++i) piece = piece * (*expr);
            out.terms_.insert(out.terms_.end(), piece.terms_.begin(), piece.terms_.end());
        }
        out.normalize();
        return out;
    }

    struct GroupKey {
        int k = 0, m = 0, comp = 0;
        friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
    };
    // partition of the terms by the selected keys (unused keys stay 0)
    std::map<GroupKey, SymExpr> collect_by(bool by_k, bool by_m, bool by_comp) const {
        std::map<GroupKey, SymExpr> out;
        for (const Term<C>& t : terms_) {
            GroupKey key{by_k ? t.k : 0, by_m ? t.m : 0, by_comp ? t.comp : 0};
            auto it = out.find(key);
            if (it == out.end()) it = out.emplace(key, SymExpr(tab_)).first;
            it->second.terms_.push_back(t);
        }
        for (auto& [key, e] : out) e.normalize();
        return out;
    }

    // numeric evaluation; env maps symbol id -> value of the unconjugated
    // symbol. Log is the principal branch. Every symbol present must be bound.
    std::vector<std::complex<double>> evaluate(const std::vector<std::complex<double>>& env, double t,
                                               double omega) const {
        std::vector<std::complex<double>> out(size_t(std::max(1, n_components())), {0.0, 0.0});
        for (const Term<C>& t_ : terms_) out[size_t(t_.comp)] += eval_term(t_, env, t, omega);
        return out;
    }

    std::complex<double> eval_term(const Term<C>& t, const std::vector<std::complex<double>>& env, double tt,
                                   double omega) const {
        std::complex<double> v = t.coeff.to_complex();
        if (t.m > 0) v *= std::pow(tt, t.m);
        if (t.k != 0) v *= std::exp(std::complex<double>(0.0, t.k * omega * tt));
        for (const Monomial::Entry& e : t.mono.exps) {
            if (size_t(e.sym) >= env.size()) throw std::domain_error("unbound symbol " + tab_->at(e.sym).name);
            std::complex<double> a = env[size_t(e.sym)];
            if ((e.p < 0 || e.q < 0) && a == std::complex<double>(0.0, 0.0))
                throw std::domain_error("negative power of zero amplitude");
            if (e.p != 0) v *= std::pow(a, e.p);
            if (e.q != 0) v *= std::pow(std::conj(a), e.q);
        }
        for (const Monomial::LogEntry& le : t.mono.logs) {
            std::complex<double> a = env[size_t(le.sym)];
            if (a == std::complex<double>(0.0, 0.0)) throw std::domain_error("Log of zero amplitude");
            if (le.r != 0) v *= std::pow(std::log(a), le.r);
            if (le.s != 0) v *= std::pow(std::log(std::conj(a)), le.s);
        }
        return v;
    }

    // coefficient of an exact (mono, k, m, comp) slot
    C coefficient(const Monomial& mono, int k = 0, int m = 0, int comp = 0) const {
        for (const Term<C>& t : terms_)
            if (t.comp == comp && t.k == k && t.m == m && t.mono == mono) return t.coeff;
        return C();
    }

    template <class F>
    SymExpr map_terms(F&& f) const {
        SymExpr out(tab_);
        for (const Term<C>& t : terms_) {
            auto r = f(t);
            if (r) out.terms_.push_back(*r);
        }
        out.normalize();
        return out;
    }

private:
    static void check_tables(const SymExpr& a, const SymExpr& b) {
        if (a.tab_ && b.tab_ && a.tab_ != b.tab_)
            throw std::invalid_argument("expressions over different symbol tables");
    }

    SymbolTablePtr tab_;
    std::vector<Term<C>> terms_;
};

using ExactExpr = SymExpr<ExactComplex>;
using NumericExpr = SymExpr<NumericComplex>;

}  // namespace ampforge
