#include <catch2/catch_amalgamated.hpp>

#include "ampforge/rgcore.hpp"
#include "support/builders.hpp"
#include "support/systems.hpp"

#include <complex>
#include <random>

using namespace ampforge;
using namespace tsup;

namespace {

// bind every free function / formal partial: name -> expression, all others zero
template <class C>
std::map<int, SymExpr<C>> function_bindings(const SymbolTablePtr& tab,
                                            const std::map<std::string, SymExpr<C>>& values) {
    std::map<int, SymExpr<C>> b;
    for (int id = 0; id < tab->size(); ++id) {
        const Symbol& s = tab->at(id);
        if (s.kind == SymbolKind::free_function) {
            auto it = values.find(s.name);
            b.emplace(id, it == values.end() ? SymExpr<C>::zero(tab) : it->second);
        }
    }
    // partials of the bound functions
    for (int id = 0; id < tab->size(); ++id) {
        const Symbol& s = tab->at(id);
        if (s.kind != SymbolKind::partial) continue;
        auto it = b.find(s.func);
        if (it != b.end()) b.emplace(id, it->second.amp_derivative(s.wrt, s.wrt_conj));
    }
    return b;
}

template <class C>
Graded<C> bind_graded(const Graded<C>& g, const std::map<int, SymExpr<C>>& b) {
    return g.substitute(b);
}

}  // namespace

TEST_CASE("cubic oscillator: renormalized solution carries the promoted naive orders") {
    auto sys = duffing_system();
    auto md = linear_modes(sys);
    auto ns = assemble_naive(sys, md, 3);
    auto ren = promote_renormalize(ns);
    // representative eps^3 tau-form terms of the worked renormalized solution
    CHECK(ren.y.at(3).coefficient(mA(4, 3), 1, 3) == qi(9, 16));
    CHECK(ren.y.at(3).coefficient(mA(4, 3), 1, 2) == q(-45, 32));
    CHECK(ren.y.at(3).coefficient(mA(4, 3), 1, 1) == qi(-123, 128));
    int alpha = ns.injected[0].sym;
    Monomial aal = mA(1, 1);
    aal.set_powers(alpha, 1, 0);
    CHECK(ren.y.at(2).coefficient(aal, 1, 1) == qi(-3));
    Monomial a2ac = mA(2, 0);
    a2ac.set_powers(alpha, 0, 1);
    CHECK(ren.y.at(2).coefficient(a2ac, 1, 1) == qi(-3, 2));
}

TEST_CASE("cubic oscillator: eps^0 and eps^1 brackets of the amplitude equation") {
    auto sys = duffing_system();
    auto md = linear_modes(sys);
    auto ren = promote_renormalize(assemble_naive(sys, md, 3));
    auto amp = derive_amplitude_equation(ren);
    auto tab = md.tab;
    int alpha = ren.functions[0].sym;
    int A = 0;
    int dA_a = tab->partial_id(alpha, A, false);
    int dAc_a = tab->partial_id(alpha, A, true);

    // eps^0: A' = iA (asserted inside derive, re-checked here)
    CHECK(amp.rhs[0].at(0) == ExactExpr::term(tab, qi(1), mA(1, 0)));

    // eps^1: -i A d_A(alpha) + i A* d_A*(alpha) + i alpha - 3/2 i A^2 A*
    ExactExpr want = ExactExpr::term(tab, qi(-1), mA(1, 0).times(Monomial::power(dA_a, 1, 0)));
    want = want + ExactExpr::term(tab, qi(1), mA(0, 1).times(Monomial::power(dAc_a, 1, 0)));
    want = want + ExactExpr::term(tab, qi(1), Monomial::power(alpha, 1, 0));
    want = want + ExactExpr::term(tab, qi(-3, 2), mA(2, 1));
    CHECK(amp.rhs[0].at(1) == want);
}

TEST_CASE("cubic oscillator: classical amplitude equation and reconstruction") {
    auto sys = duffing_system();
    auto md = linear_modes(sys);
    auto ren = promote_renormalize(assemble_naive(sys, md, 3));
    auto amp = detrend(derive_amplitude_equation(ren));
    auto b = function_bindings<ExactComplex>(md.tab, {});
    auto rhs = bind_graded(amp.rhs[0], b);

    CHECK(rhs.at(0).is_zero());
    CHECK(rhs.at(1) == ExactExpr::term(md.tab, qi(-3, 2), mA(2, 1)));
    CHECK(rhs.at(2) == ExactExpr::term(md.tab, qi(-15, 16), mA(3, 2)));
    CHECK(rhs.at(3) == ExactExpr::term(md.tab, qi(-123, 128), mA(4, 3)));

    auto recon = bind_graded(amp.reconstruction, b);
    CHECK(recon.at(0).coefficient(mA(1, 0)) == q(1));
    CHECK(recon.at(1).coefficient(mA(3, 0)) == q(-1, 8));
    CHECK(recon.at(1).n_terms() == 2);  // plus conjugate
    CHECK(recon.at(2).coefficient(mA(5, 0)) == q(1, 64));
    CHECK(recon.at(2).coefficient(mA(4, 1)) == q(-21, 64));
    CHECK(recon.at(3).coefficient(mA(6, 1)) == q(43, 512));
    CHECK(recon.at(3).coefficient(mA(5, 2)) == q(-417, 512));
    CHECK(recon.at(3).coefficient(mA(7, 0)) == q(-1, 512));
}

TEST_CASE("relaxation oscillator: classical brackets at every order") {
    auto sys = vdp_system();
    auto md = linear_modes(sys);
    auto ren = promote_renormalize(assemble_naive(sys, md, 4));
    auto amp = derive_amplitude_equation(ren);
    auto tab = md.tab;
    int alpha = ren.functions[0].sym;
    int dA_a = tab->partial_id(alpha, 0, false);
    int dAc_a = tab->partial_id(alpha, 0, true);

    // eps^1 bracket with the free function symbolic:
    // i alpha + i A* dA*(alpha) - i A dA(alpha) - 1/2 A^2 A* + A/2
    ExactExpr want = ExactExpr::term(tab, qi(1), Monomial::power(alpha, 1, 0));
    want = want + ExactExpr::term(tab, qi(1), mA(0, 1).times(Monomial::power(dAc_a, 1, 0)));
    want = want + ExactExpr::term(tab, qi(-1), mA(1, 0).times(Monomial::power(dA_a, 1, 0)));
    want = want + ExactExpr::term(tab, q(-1, 2), mA(2, 1));
    want = want + ExactExpr::term(tab, q(1, 2), mA(1, 0));
    CHECK(amp.rhs[0].at(1) == want);

    // classical (zero functions): the derivation-consistent signs
    auto b = function_bindings<ExactComplex>(tab, {});
    auto rhs = bind_graded(detrend(amp).rhs[0], b);
    ExactExpr e1 = ExactExpr::term(tab, q(1, 2), mA(1, 0)) + ExactExpr::term(tab, q(-1, 2), mA(2, 1));
    CHECK(rhs.at(1) == e1);
    ExactExpr e2 = ExactExpr::term(tab, qi(-7, 16), mA(3, 2)) + ExactExpr::term(tab, qi(1, 2), mA(2, 1)) +
                   ExactExpr::term(tab, qi(-1, 8), mA(1, 0));
    CHECK(rhs.at(2) == e2);
    ExactExpr e3 = ExactExpr::term(tab, q(-37, 128), mA(4, 3)) + ExactExpr::term(tab, q(35, 64), mA(3, 2)) +
                   ExactExpr::term(tab, q(-1, 4), mA(2, 1));
    CHECK(rhs.at(3) == e3);
    ExactExpr e4 = ExactExpr::term(tab, qi(497, 3072), mA(5, 4)) + ExactExpr::term(tab, qi(-211, 512), mA(4, 3)) +
                   ExactExpr::term(tab, qi(85, 256), mA(3, 2)) + ExactExpr::term(tab, qi(-1, 16), mA(2, 1)) +
                   ExactExpr::term(tab, qi(-1, 128), mA(1, 0));
    CHECK(rhs.at(4) == e4);
}

TEST_CASE("predator-prey: symbolic eps^1 bracket and classical variants") {
    auto sys = lv_system();
    auto md = linear_modes(sys);
    auto ren = promote_renormalize(assemble_naive(sys, md, 3));
    auto amp = derive_amplitude_equation(ren);
    auto tab = md.tab;
    int alpha = ren.functions[0].sym;
    int dA_a = tab->partial_id(alpha, 0, false);
    int dAc_a = tab->partial_id(alpha, 0, true);

    // eps^1: i alpha + i A* dA*(alpha) - i A dA(alpha)   (no inhomogeneous part)
    ExactExpr want = ExactExpr::term(tab, qi(1), Monomial::power(alpha, 1, 0));
    want = want + ExactExpr::term(tab, qi(1), mA(0, 1).times(Monomial::power(dAc_a, 1, 0)));
    want = want + ExactExpr::term(tab, qi(-1), mA(1, 0).times(Monomial::power(dA_a, 1, 0)));
    CHECK(amp.rhs[0].at(1) == want);

    auto damp = detrend(amp);

    // zero functions: A' = -(1/3) i eps^2 A^2 A*, no eps^3 term
    auto b0 = function_bindings<ExactComplex>(tab, {});
    auto rhs0 = bind_graded(damp.rhs[0], b0);
    CHECK(rhs0.at(1).is_zero());
    CHECK(rhs0.at(2) == ExactExpr::term(tab, qi(-1, 3), mA(2, 1)));
    CHECK(rhs0.at(3).is_zero());

    // alpha = A (the published classical variant): adds -(2/3) i eps^3 A^2 A*
    std::map<std::string, ExactExpr> vals;
    vals.emplace("alpha", ExactExpr::term(tab, q(1), mA(1, 0)));
    auto b1 = function_bindings<ExactComplex>(tab, vals);
    auto rhs1 = bind_graded(damp.rhs[0], b1);
    CHECK(rhs1.at(1).is_zero());
    CHECK(rhs1.at(2) == ExactExpr::term(tab, qi(-1, 3), mA(2, 1)));
    CHECK(rhs1.at(3) == ExactExpr::term(tab, qi(-2, 3), mA(2, 1)));

    // classical reconstruction termwise (x component shown here)
    auto recon = bind_graded(damp.reconstruction, b1);
    auto x = [&](int n) { return recon.at(n).component(0); };
    CHECK(x(0).coefficient(mA(1, 0)) == qi(1));
    CHECK(x(1).coefficient(mA(1, 0)) == qi(1));
    CHECK(x(1).coefficient(mA(2, 0)) == qc(-2, 3, 1, 3));
    CHECK(x(2).coefficient(mA(3, 0)) == qc(-1, 2, -1, 4));
    CHECK(x(2).coefficient(mA(2, 1)) == q(1, 3));
    CHECK(x(2).coefficient(mA(2, 0)) == qc(-4, 3, 2, 3));
    CHECK(x(3).coefficient(mA(4, 0)) == qc(-14, 135, -56, 135));
    CHECK(x(3).coefficient(mA(3, 0)) == qc(-3, 2, -3, 4));
    CHECK(x(3).coefficient(mA(2, 1)) == q(1));
    CHECK(x(3).coefficient(mA(2, 0)) == qc(-2, 3, 1, 3));
    CHECK(x(3).coefficient(mA(3, 1)) == qc(2, 27, 19, 54));
    auto y = [&](int n) { return recon.at(n).component(1); };
    CHECK(y(1).coefficient(mA(2, 0)) == qc(2, 3, 1, 3));
    CHECK(y(1).coefficient(mA(1, 0)) == q(1));
    CHECK(y(2).coefficient(mA(3, 0)) == qc(1, 4, 1, 2));
    CHECK(y(3).coefficient(mA(4, 0)) == qc(-14, 135, 56, 135));
    CHECK(y(3).coefficient(mA(3, 1)) == qc(4, 27, -5, 54));

    // modified variant (all functions zero) reconstruction: the published pair
    auto recon0 = bind_graded(damp.reconstruction, b0);
    CHECK(recon0.at(1).component(0).coefficient(mA(1, 0)) == q(0));
    CHECK(recon0.at(2).component(0).coefficient(mA(2, 1)) == q(1, 3));
    CHECK(recon0.at(3).component(0).coefficient(mA(3, 1)) == qc(2, 27, 19, 54));
    CHECK(recon0.at(3).component(1).coefficient(mA(3, 1)) == qc(4, 27, -5, 54));
}

TEST_CASE("second-order pair: symbolic eps^1 bracket of the first amplitude") {
    auto sys = twomode_system();
    auto md = linear_modes(sys, twomode_overrides());
    auto ren = promote_renormalize(assemble_naive(sys, md, 2));
    auto amp = derive_amplitude_equation(ren);
    auto tab = md.tab;
    int alpha = ren.functions[0].sym;
    int A = 0, B = 1;
    int dA_a = tab->partial_id(alpha, A, false);
    int dAc_a = tab->partial_id(alpha, A, true);
    int dB_a = tab->partial_id(alpha, B, false);
    int dBc_a = tab->partial_id(alpha, B, true);

    // i alpha + i A* dA*(alpha) - 1/2 i A* B - i A dA(alpha) + 2i B* dB*(alpha) - 2i B dB(alpha)
    ExactExpr want = ExactExpr::term(tab, qi(1), Monomial::power(alpha, 1, 0));
    want = want + ExactExpr::term(tab, qi(1), mAB(0, 1, 0, 0).times(Monomial::power(dAc_a, 1, 0)));
    want = want + ExactExpr::term(tab, qi(-1, 2), mAB(0, 1, 1, 0));
    want = want + ExactExpr::term(tab, qi(-1), mAB(1, 0, 0, 0).times(Monomial::power(dA_a, 1, 0)));
    want = want + ExactExpr::term(tab, qi(2), mAB(0, 0, 0, 1).times(Monomial::power(dBc_a, 1, 0)));
    want = want + ExactExpr::term(tab, qi(-2), mAB(0, 0, 1, 0).times(Monomial::power(dB_a, 1, 0)));
    CHECK(amp.rhs[0].at(1) == want);

    // B equation at eps^1 carries only beta terms; with functions zeroed it vanishes
    auto b0 = function_bindings<ExactComplex>(tab, {});
    CHECK(bind_graded(amp.rhs[1], b0).at(1).is_zero());
}

TEST_CASE("back substitution: classical residual scales as eps^{N+1}") {
    auto sys = lv_system();
    auto md = linear_modes(sys);
    int N = 3;
    auto ren = promote_renormalize(assemble_naive(sys, md, N));
    auto tab = md.tab;
    auto dA = rg_detail::derivative_symbols(md);
    auto b0 = function_bindings<ExactComplex>(tab, {});

    // equations W_x, W_y with functions zeroed
    Graded<ExactComplex> W(tab, N + 1);
    for (int n = 0; n <= N; ++n)
        W.at(n) = rg_detail::mu_derivative_at_tau0(ren.y.at(n), md, dA).substitute(b0);
    auto amp = derive_amplitude_equation(ren);
    auto rhs0 = bind_graded(amp.rhs[0], b0);

    std::mt19937 rng(5);
    std::vector<std::complex<double>> base(size_t(tab->size()), {0.0, 0.0});
    base[0] = rand_unit(rng) * 0.5;

    auto residual = [&](double eps) {
        // numeric value of dA at these amplitudes
        std::complex<double> dAval = 0;
        for (int n = 0; n <= N; ++n) dAval += std::pow(eps, n) * rhs0.at(n).evaluate(base, 0.0, 1.0)[0];
        auto env = base;
        env[size_t(dA[0])] = dAval;
        double r = 0;
        for (int c = 0; c < 2; ++c) {
            std::complex<double> acc = 0;
            for (int n = 0; n <= N; ++n) acc += std::pow(eps, n) * W.at(n).component(c).evaluate(env, 0.0, 1.0)[0];
            r = std::max(r, std::abs(acc));
        }
        return r;
    };
    double r1 = residual(0.1), r2 = residual(0.05);
    double order = std::log2(r1 / r2);
    CHECK(order >= N + 1 - 1.0);  // observed order >= N+1 within factor 2
    CHECK(order <= N + 3.0);
}
