#pragma once

// Perturbation hierarchy: generate the order equations and solve them one by
// one. Expressions hold both conjugate halves explicitly. At every order a
// fresh homogeneous solution (one per mode) is injected; its constant is a
// free-function symbol that later stages promote and constrain.

#include "ampforge/graded.hpp"
#include "ampforge/linalg.hpp"
#include "ampforge/model.hpp"
#include "ampforge/symexpr.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace ampforge {

inline const char* greek_name(int idx) {
    static const std::array<const char*, 12> names = {"alpha", "beta", "gamma", "delta", "eta", "zeta",
                                                      "theta", "kappa", "lambda", "sigma", "phi", "psi"};
    if (idx < 0 || idx >= int(names.size())) throw std::out_of_range("too many injected functions");
    return names[size_t(idx)];
}

template <class C>
struct OrderEquation {
    int order = 0;
    SymExpr<C> forcing;
};

struct InjectedFunction {
    int sym = -1;   // free-function symbol id
    int order = 0;  // epsilon order it enters the solution at
    int mode = 0;   // target mode index
    std::string name;
};

template <class C>
struct NaiveSolution {
    OdeSystem<C> sys;
    ModeData<C> modes;
    int N = 0;
    std::vector<SymExpr<C>> y;          // y[0..N]
    std::vector<OrderEquation<C>> eqs;  // order 1..N forcings
    std::vector<InjectedFunction> injected;
};

namespace detail {

// epsilon-graded state series X[d] from the solved orders
template <class C>
std::vector<Graded<C>> state_series(const std::vector<SymExpr<C>>& y, int n, int dim, SymbolTablePtr tab) {
    std::vector<Graded<C>> X(size_t(dim), Graded<C>(tab, n + 1));
    for (int m = 0; m <= n && m < int(y.size()); ++m)
        for (int d = 0; d < dim; ++d) X[size_t(d)].at(m) = y[size_t(m)].component(d);
    return X;
}

}  // namespace detail

// Forcing of order n: the eps^n coefficient of sum_p eps^p N_p evaluated on
// the solved series y_0..y_{n-1}.
template <class C>
SymExpr<C> order_forcing(const OdeSystem<C>& sys, const ModeData<C>& md, const std::vector<SymExpr<C>>& y,
                         int n) {
    using RT = typename coeff_traits<C>::real_type;
    SymbolTablePtr tab = md.tab;
    auto X = detail::state_series(y, n - 1, sys.n, tab);
    std::vector<Graded<C>> Xd;
    if (sys.second_order) {
        Xd.assign(size_t(sys.n), Graded<C>(tab, n));
        for (int d = 0; d < sys.n; ++d)
            for (int m = 0; m < n; ++m) Xd[size_t(d)].at(m) = X[size_t(d)].at(m).dt_derivative(md.omega);
    }
    SymExpr<C> F(tab);
    for (const NonlinTerm<C>& t : sys.nonlin) {
        if (t.eps_power > n) continue;
        int want = n - t.eps_power;
        Graded<C> prod = Graded<C>::of(SymExpr<C>::constant(tab, t.coeff), 0, want + 1);
        for (int d = 0; d < sys.n; ++d) {
            for (int r = 0; r < t.sm.pow[size_t(d)]; ++r) prod = Graded<C>::mul(prod, X[size_t(d)], want + 1);
            if (!t.sm.dpow.empty())
                for (int r = 0; r < t.sm.dpow[size_t(d)]; ++r) prod = Graded<C>::mul(prod, Xd[size_t(d)], want + 1);
        }
        F = F + prod.at(want).with_component(t.comp);
    }
    return F;
}

// Residual of a candidate order solution: y'' + G y - F (or y' + G y - F).
template <class C>
SymExpr<C> order_residual(const OdeSystem<C>& sys, const ModeData<C>& md, const SymExpr<C>& yn,
                          const SymExpr<C>& forcing) {
    SymExpr<C> lhs(md.tab);
    SymExpr<C> dyn = yn.dt_derivative(md.omega);
    if (sys.second_order) lhs = dyn.dt_derivative(md.omega);
    else lhs = dyn;
    for (int i = 0; i < sys.n; ++i) {
        SymExpr<C> row(md.tab);
        for (int j = 0; j < sys.n; ++j)
            row = row + yn.component(j).scaled(sys.G[size_t(i)][size_t(j)]);
        lhs = lhs + row.with_component(i);
    }
    return lhs - forcing;
}

// Solve one forced order: polynomial ansatz per oscillator/monomial group,
// degree d (non-resonant) or d+1 (resonant), coefficients by row reduction
// with free variables zero; then inject the fresh homogeneous solutions.
template <class C>
SymExpr<C> solve_linear_forced(const OdeSystem<C>& sys, const ModeData<C>& md, const SymExpr<C>& forcing,
                               int order, std::vector<InjectedFunction>* injected, bool inject = true) {
    SymbolTablePtr tab = md.tab;
    SymExpr<C> yn(tab);
    C iw = C::i() * coeff_traits<C>::from_real(md.omega);

    // group by (oscillator, monomial)
    std::map<std::pair<int, Monomial>, std::map<std::pair<int, int>, C>> groups;  // (k,M) -> (m,comp) -> coeff
    for (const Term<C>& t : forcing.terms()) {
        if (t.mono.has_logs()) throw std::logic_error("Log factor in hierarchy forcing");
        groups[{t.k, t.mono}][{t.m, t.comp}] += t.coeff;
    }
    for (auto& [key, rhs] : groups) {
        auto [k, mono] = key;
        int deg = 0;
        for (auto& [mc, c] : rhs) deg = std::max(deg, mc.first);
        bool resonant = false;
        for (const auto& mode : md.modes) resonant = resonant || std::abs(k) == mode.k;
        int D = deg + (resonant ? 1 : 0);
        int n = sys.n;
        size_t nun = size_t(n * (D + 1));
        std::vector<std::vector<C>> A(nun, std::vector<C>(nun, C()));
        std::vector<C> b(nun, C());
        // rows: equation at t-power m, component i
        for (int m = 0; m <= D; ++m) {
            for (int i = 0; i < n; ++i) {
                size_t row = size_t(m * n + i);
                auto it = rhs.find({m, i});
                if (it != rhs.end()) b[row] = it->second;
                for (int j = 0; j < n; ++j) {
                    size_t colQm = size_t(m * n + j);
                    // second order: (G + (ikw)^2) Q_m + 2ikw (m+1) Q_{m+1} + (m+1)(m+2) Q_{m+2} = P_m
                    // first order:  (G + ikw) Q_m + (m+1) Q_{m+1} = P_m
                    A[row][colQm] += sys.G[size_t(i)][size_t(j)];
                    if (i == j) A[row][colQm] += sys.second_order ? iw * iw * C(k * k) : iw * C(k);
                }
                if (m + 1 <= D) {
                    size_t col = size_t((m + 1) * n + i);
                    if (sys.second_order) A[row][col] += iw * C(2 * k) * C(m + 1);
                    else A[row][col] += C(m + 1);
                }
                if (sys.second_order && m + 2 <= D) {
                    size_t col = size_t((m + 2) * n + i);
                    A[row][col] += C((m + 1) * (m + 2));
                }
            }
        }
        auto sol = solve_rref(A, b);
        if (!sol.consistent) throw std::logic_error("inconsistent order solve (internal error)");
        for (int m = 0; m <= D; ++m)
            for (int i = 0; i < n; ++i) {
                C c = sol.x[size_t(m * n + i)];
                if (c.is_zero()) continue;
                Term<C> t;
                t.coeff = c;
                t.m = m;
                t.k = k;
                t.comp = i;
                t.mono = mono;
                yn.push_raw(std::move(t));
            }
    }
    yn.normalize();

    if (inject) {
        int m = int(md.modes.size());
        for (int j = 0; j < m; ++j) {
            const auto& mode = md.modes[size_t(j)];
            int fid = tab->add_function(greek_name((order - 1) * m + j), mode.k, order, j);
            if (injected) injected->push_back({fid, order, j, tab->at(fid).name});
            for (int i = 0; i < sys.n; ++i) {
                if (mode.vec[size_t(i)].is_zero()) continue;
                Term<C> t;
                t.coeff = mode.vec[size_t(i)];
                t.k = mode.k;
                t.comp = i;
                t.mono = Monomial::power(fid, 1, 0);
                yn.push_raw(t);
                Term<C> tc;
                tc.coeff = mode.vec[size_t(i)].conj();
                tc.k = -mode.k;
                tc.comp = i;
                tc.mono = Monomial::power(fid, 0, 1);
                yn.push_raw(tc);
            }
        }
        yn.normalize();
    }
    return yn;
}

// Full naive solution to order N (inclusive). y_0 is the general mode sum.
template <class C>
NaiveSolution<C> assemble_naive(const OdeSystem<C>& sys, const ModeData<C>& md, int N) {
    if (N < 0) throw std::invalid_argument("expansion order must be >= 0");
    NaiveSolution<C> out;
    out.sys = sys;
    out.modes = md;
    out.N = N;
    SymbolTablePtr tab = md.tab;

    SymExpr<C> y0(tab);
    for (const auto& mode : md.modes) {
        for (int i = 0; i < sys.n; ++i) {
            if (mode.vec[size_t(i)].is_zero()) continue;
            Term<C> t;
            t.coeff = mode.vec[size_t(i)];
            t.k = mode.k;
            t.comp = i;
            t.mono = Monomial::power(mode.amp_sym, 1, 0);
            y0.push_raw(t);
            Term<C> tc;
            tc.coeff = mode.vec[size_t(i)].conj();
            tc.k = -mode.k;
            tc.comp = i;
            tc.mono = Monomial::power(mode.amp_sym, 0, 1);
            y0.push_raw(tc);
        }
    }
    y0.normalize();
    out.y.push_back(std::move(y0));

    for (int n = 1; n <= N; ++n) {
        SymExpr<C> F = order_forcing(sys, md, out.y, n);
        out.eqs.push_back({n, F});
        out.y.push_back(solve_linear_forced(sys, md, F, n, &out.injected));
    }
    return out;
}

}  // namespace ampforge
