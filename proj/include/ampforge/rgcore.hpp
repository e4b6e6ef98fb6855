#pragma once

// From the naive solution to the amplitude equations. The naive orders are
// reinterpreted in tau = t - mu with every constant promoted to a function
// of mu (amplitudes A_j(mu); the injected constants become free functions of
// the amplitudes, with formal first partials carried as opaque symbols).
// Setting the mu-derivative to zero at tau -> 0 yields a square linear
// system for the amplitude derivatives, solved by series-inverting the
// leading matrix. Detrending then removes the fast eps^0 rotation.

#include "ampforge/graded.hpp"
#include "ampforge/hierarchy.hpp"
#include "ampforge/linalg.hpp"

#include <string>
#include <vector>

namespace ampforge {

template <class C>
struct RenormalizedSolution {
    OdeSystem<C> sys;
    ModeData<C> modes;
    int N = 0;
    Graded<C> y;  // vector-valued, tau-form: t-variable now means tau
    std::vector<InjectedFunction> functions;
};

template <class C>
struct AmplitudeSystem {
    OdeSystem<C> sys;
    ModeData<C> modes;
    int N = 0;
    bool detrended = false;
    std::vector<Graded<C>> rhs;  // per mode: A_j' = rhs[j] (+ i k_j w A_j before detrend)
    Graded<C> reconstruction;    // tau->0 limit of the renormalized solution
    std::vector<InjectedFunction> functions;
};

template <class C>
RenormalizedSolution<C> promote_renormalize(const NaiveSolution<C>& ns) {
    RenormalizedSolution<C> out;
    out.sys = ns.sys;
    out.modes = ns.modes;
    out.N = ns.N;
    out.functions = ns.injected;
    out.y = Graded<C>(ns.modes.tab, ns.N + 1);
    for (int n = 0; n <= ns.N; ++n) out.y.at(n) = ns.y[size_t(n)];
    return out;
}

namespace rg_detail {

// ids of the derivative unknowns dA_j, created on demand per table
template <class C>
std::vector<int> derivative_symbols(const ModeData<C>& md) {
    std::vector<int> ids;
    for (const auto& mode : md.modes) {
        std::string name = "d(" + mode.amp_name + ")";
        int id = md.tab->find(name);
        if (id < 0) id = md.tab->add_constant(name, 0, int(&mode - md.modes.data()));
        ids.push_back(id);
    }
    return ids;
}

// mu-derivative of one tau-form expression, evaluated at tau -> 0.
// Chain rule introduces dA_j / conj(dA_j) factors and formal partial symbols
// for the free functions; partials are never differentiated again.
template <class C>
SymExpr<C> mu_derivative_at_tau0(const SymExpr<C>& e, const ModeData<C>& md, const std::vector<int>& dA) {
    SymbolTablePtr tab = e.table();
    C iw = C::i() * coeff_traits<C>::from_real(md.omega);
    SymExpr<C> out(tab);
    for (const Term<C>& t : e.terms()) {
        if (t.m >= 2) continue;
        if (t.m == 1) {
            // d tau / d mu = -1
            Term<C> a = t;
            a.m = 0;
            a.k = 0;
            a.coeff = -t.coeff;
            out.push_raw(std::move(a));
            continue;
        }
        // -i k w from the oscillator factor
        if (t.k != 0) {
            Term<C> a = t;
            a.k = 0;
            a.coeff = t.coeff * iw * C(-t.k);
            out.push_raw(std::move(a));
        }
        // chain rule through the monomial
        for (const Monomial::Entry& en : t.mono.exps) {
            const Symbol& s = tab->at(en.sym);
            if (s.kind == SymbolKind::constant) continue;
            if (s.kind == SymbolKind::partial)
                throw std::logic_error("formal partial differentiated again");
            if (s.kind == SymbolKind::amplitude) {
                int j = s.mode;
                if (en.p != 0) {
                    Term<C> a = t;
                    a.k = 0;
                    a.coeff = t.coeff * C(en.p);
                    a.mono.set_powers(en.sym, en.p - 1, en.q);
                    a.mono = a.mono.times(Monomial::power(dA[size_t(j)], 1, 0));
                    out.push_raw(std::move(a));
                }
                if (en.q != 0) {
                    Term<C> a = t;
                    a.k = 0;
                    a.coeff = t.coeff * C(en.q);
                    a.mono.set_powers(en.sym, en.p, en.q - 1);
                    a.mono = a.mono.times(Monomial::power(dA[size_t(j)], 0, 1));
                    out.push_raw(std::move(a));
                }
            } else {  // free function: d f = sum_j df/dA_j dA_j + df/dA_j* dA_j*
                for (size_t j = 0; j < md.modes.size(); ++j) {
                    int amp = md.modes[j].amp_sym;
                    int pA = tab->partial_id(en.sym, amp, false);
                    int pAc = tab->partial_id(en.sym, amp, true);
                    if (en.p != 0) {
                        Term<C> a = t;
                        a.k = 0;
                        a.coeff = t.coeff * C(en.p);
                        a.mono.set_powers(en.sym, en.p - 1, en.q);
                        Term<C> b = a;
                        a.mono = a.mono.times(Monomial::power(pA, 1, 0)).times(Monomial::power(dA[j], 1, 0));
                        b.mono = b.mono.times(Monomial::power(pAc, 1, 0)).times(Monomial::power(dA[j], 0, 1));
                        out.push_raw(std::move(a));
                        out.push_raw(std::move(b));
                    }
                    if (en.q != 0) {
                        // d(f*) = conj(df): conj partial symbols pair with swapped dA
                        Term<C> a = t;
                        a.k = 0;
                        a.coeff = t.coeff * C(en.q);
                        a.mono.set_powers(en.sym, en.p, en.q - 1);
                        Term<C> b = a;
                        a.mono = a.mono.times(Monomial::power(pA, 0, 1)).times(Monomial::power(dA[j], 0, 1));
                        b.mono = b.mono.times(Monomial::power(pAc, 0, 1)).times(Monomial::power(dA[j], 1, 0));
                        out.push_raw(std::move(a));
                        out.push_raw(std::move(b));
                    }
                }
            }
        }
        for (const Monomial::LogEntry& le : t.mono.logs) {
            int j = tab->at(le.sym).mode;
            if (le.r != 0) {
                Term<C> a = t;
                a.k = 0;
                a.coeff = t.coeff * C(le.r);
                a.mono.add_log(le.sym, -1, 0);
                auto [p, q] = a.mono.powers(le.sym);
                a.mono.set_powers(le.sym, p - 1, q);
                a.mono = a.mono.times(Monomial::power(dA[size_t(j)], 1, 0));
                out.push_raw(std::move(a));
            }
            if (le.s != 0) {
                Term<C> a = t;
                a.k = 0;
                a.coeff = t.coeff * C(le.s);
                a.mono.add_log(le.sym, 0, -1);
                auto [p, q] = a.mono.powers(le.sym);
                a.mono.set_powers(le.sym, p, q - 1);
                a.mono = a.mono.times(Monomial::power(dA[size_t(j)], 0, 1));
                out.push_raw(std::move(a));
            }
        }
    }
    out.normalize();
    return out;
}

template <class C>
SymExpr<C> filter_positive_oscillators(const SymExpr<C>& e) {
    return e.map_terms([](const Term<C>& t) -> std::optional<Term<C>> {
        if (t.k > 0) return t;
        if (t.k == 0)
            throw std::logic_error("scalar holomorphic split with DC content unsupported");
        return std::nullopt;
    });
}

}  // namespace rg_detail

// Derive the amplitude system by the mu-independence condition.
template <class C>
AmplitudeSystem<C> derive_amplitude_equation(const RenormalizedSolution<C>& ren) {
    using RT = typename coeff_traits<C>::real_type;
    const ModeData<C>& md = ren.modes;
    SymbolTablePtr tab = md.tab;
    int m = int(md.modes.size());
    int n_eq = 2 * m;
    int nord = ren.N + 1;
    auto dA = rg_detail::derivative_symbols(md);

    // assemble the equations as graded expressions in the dA symbols
    std::vector<Graded<C>> eqs;
    auto mu_of = [&](const Graded<C>& g) {
        Graded<C> out(tab, nord);
        for (int n = 0; n < nord; ++n) out.at(n) = rg_detail::mu_derivative_at_tau0(g.at(n), md, dA);
        return out;
    };
    if (ren.sys.n == 1) {
        // holomorphic half plus its conjugate
        Graded<C> pos(tab, nord);
        for (int n = 0; n < nord; ++n) pos.at(n) = rg_detail::filter_positive_oscillators(ren.y.at(n));
        Graded<C> E = mu_of(pos);
        eqs.push_back(E);
        eqs.push_back(E.conjugate());
    } else if (!ren.sys.second_order) {
        Graded<C> W = mu_of(ren.y);
        for (int c = 0; c < ren.sys.n; ++c) eqs.push_back(W.component(c));
    } else {
        Graded<C> W = mu_of(ren.y);
        Graded<C> ydot(tab, nord);
        for (int n = 0; n < nord; ++n) ydot.at(n) = ren.y.at(n).dt_derivative(md.omega);
        Graded<C> Wd = mu_of(ydot);
        for (int c = 0; c < ren.sys.n; ++c) eqs.push_back(W.component(c));
        for (int c = 0; c < ren.sys.n; ++c) eqs.push_back(Wd.component(c));
    }
    if (int(eqs.size()) != n_eq) throw std::logic_error("equation count != 2m (unsupported shape)");

    // split each equation into sum_l M[e][l] X_l - R[e]
    std::vector<std::vector<Graded<C>>> M(size_t(n_eq), std::vector<Graded<C>>(size_t(n_eq), Graded<C>(tab, nord)));
    std::vector<Graded<C>> R(size_t(n_eq), Graded<C>(tab, nord));
    auto column_of = [&](const Monomial& mono, int* which) -> bool {
        // returns true when the monomial holds exactly one dA factor; strips it
        *which = -1;
        for (const Monomial::Entry& en : mono.exps) {
            for (int j = 0; j < m; ++j) {
                if (en.sym == dA[size_t(j)]) {
                    if (en.p + en.q != 1 || *which >= 0)
                        throw std::logic_error("amplitude derivative appears nonlinearly");
                    *which = en.p == 1 ? j : m + j;
                }
            }
        }
        return *which >= 0;
    };
    for (int e = 0; e < n_eq; ++e) {
        for (int n = 0; n < nord; ++n) {
            for (const Term<C>& t : eqs[size_t(e)].at(n).terms()) {
                int which;
                Term<C> s = t;
                if (column_of(t.mono, &which)) {
                    Monomial stripped;
                    for (const Monomial::Entry& en : t.mono.exps) {
                        bool is_dA = false;
                        for (int j = 0; j < m; ++j) is_dA = is_dA || en.sym == dA[size_t(j)];
                        if (!is_dA) stripped.exps.push_back(en);
                    }
                    stripped.logs = t.mono.logs;
                    s.mono = stripped;
                    M[size_t(e)][size_t(which)].at(n).push_raw(std::move(s));
                } else {
                    s.coeff = -s.coeff;
                    R[size_t(e)].at(n).push_raw(std::move(s));
                }
            }
            for (int l = 0; l < n_eq; ++l) M[size_t(e)][size_t(l)].at(n).normalize();
            R[size_t(e)].at(n).normalize();
        }
    }

    // leading matrix must be constant
    std::vector<std::vector<C>> M0(size_t(n_eq), std::vector<C>(size_t(n_eq)));
    for (int e = 0; e < n_eq; ++e)
        for (int l = 0; l < n_eq; ++l) {
            const SymExpr<C>& lead = M[size_t(e)][size_t(l)].at(0);
            for (const Term<C>& t : lead.terms()) {
                if (!t.mono.is_one() || t.m != 0 || t.k != 0)
                    throw std::logic_error("leading derivative matrix is not constant");
                M0[size_t(e)][size_t(l)] = t.coeff;
            }
        }
    auto M0inv = invert(M0);

    auto apply_const = [&](const std::vector<std::vector<C>>& A, const std::vector<Graded<C>>& v) {
        std::vector<Graded<C>> out(size_t(n_eq), Graded<C>(tab, nord));
        for (int i = 0; i < n_eq; ++i)
            for (int j = 0; j < n_eq; ++j) {
                if (A[size_t(i)][size_t(j)].is_zero()) continue;
                for (int n = 0; n < nord; ++n)
                    out[size_t(i)].at(n) = out[size_t(i)].at(n) + v[size_t(j)].at(n).scaled(A[size_t(i)][size_t(j)]);
            }
        return out;
    };
    // Mplus = M - M0 (strictly positive order after multiplying by M0inv)
    std::vector<std::vector<Graded<C>>> Mplus = M;
    for (int e = 0; e < n_eq; ++e)
        for (int l = 0; l < n_eq; ++l) {
            SymExpr<C> lead = Mplus[size_t(e)][size_t(l)].at(0);
            Mplus[size_t(e)][size_t(l)].at(0) = lead - SymExpr<C>::constant(tab, M0[size_t(e)][size_t(l)]);
        }

    std::vector<Graded<C>> X = apply_const(M0inv, R);
    std::vector<Graded<C>> Y0 = X;
    for (int it = 0; it < ren.N; ++it) {
        // X <- Y0 - M0inv Mplus X
        std::vector<Graded<C>> MX(size_t(n_eq), Graded<C>(tab, nord));
        for (int e = 0; e < n_eq; ++e)
            for (int l = 0; l < n_eq; ++l)
                MX[size_t(e)] = MX[size_t(e)] + Graded<C>::mul(Mplus[size_t(e)][size_t(l)], X[size_t(l)], nord);
        auto corr = apply_const(M0inv, MX);
        for (int e = 0; e < n_eq; ++e) X[size_t(e)] = Y0[size_t(e)] - corr[size_t(e)];
    }

    AmplitudeSystem<C> out;
    out.sys = ren.sys;
    out.modes = md;
    out.N = ren.N;
    out.detrended = false;
    out.functions = ren.functions;
    for (int j = 0; j < m; ++j) out.rhs.push_back(X[size_t(j)]);

    // sanity: eps^0 term is exactly i k_j w A_j
    for (int j = 0; j < m; ++j) {
        C ikw = C::i() * coeff_traits<C>::from_real(md.omega) * C(md.modes[size_t(j)].k);
        SymExpr<C> want = SymExpr<C>::term(tab, ikw, Monomial::power(md.modes[size_t(j)].amp_sym, 1, 0));
        if (!(out.rhs[size_t(j)].at(0) == want)) throw std::logic_error("eps^0 amplitude term is not ik w A");
    }
    // conjugate consistency of the solved pair
    for (int j = 0; j < m; ++j)
        if (!(X[size_t(m + j)] == X[size_t(j)].conjugate()))
            throw std::logic_error("conjugate amplitude equation inconsistent");

    // reconstruction: tau -> 0 of the renormalized solution
    out.reconstruction = Graded<C>(tab, nord);
    for (int n = 0; n < nord; ++n)
        out.reconstruction.at(n) = ren.y.at(n).map_terms([](const Term<C>& t) -> std::optional<Term<C>> {
            if (t.m > 0) return std::nullopt;
            Term<C> s = t;
            s.k = 0;
            return s;
        });
    return out;
}

// Remove the fast eps^0 rotation: A_j -> A_j e^{i k_j w t}. Weight-k_j
// monomials keep their coefficients; the (rare) off-weight monomials keep a
// nonzero phase tag weight(M) - k_j, realized at evaluation time.
template <class C>
AmplitudeSystem<C> detrend(const AmplitudeSystem<C>& amp) {
    if (amp.detrended) throw std::invalid_argument("already detrended");
    AmplitudeSystem<C> out = amp;
    out.detrended = true;
    for (size_t j = 0; j < out.rhs.size(); ++j) out.rhs[j].at(0) = SymExpr<C>(out.modes.tab);
    return out;
}

}  // namespace ampforge
