#pragma once

// Problem definition and linear mode analysis. Systems are stored in the
// left-hand-side form the problems are written in,
//     x'  + G x = sum_p eps^p N_p(x)     (first order)
//     x'' + G x = sum_p eps^p N_p(x,x')  (second order)
// so the internal linear operator is L = -G. Mode analysis produces the base
// frequency w (the smallest generator with every eigenfrequency an integer
// multiple k_j w) and one amplitude symbol per conjugate pair.

#include "ampforge/coeff.hpp"
#include "ampforge/graded.hpp"
#include "ampforge/symexpr.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace ampforge {

struct StateMonomial {
    std::vector<int> pow;   // power of each state variable
    std::vector<int> dpow;  // power of each first derivative (second-order problems)
    int degree() const {
        int d = 0;
        for (int p : pow) d += p;
        for (int p : dpow) d += p;
        return d;
    }
    friend bool operator==(const StateMonomial&, const StateMonomial&) = default;
};

template <class C>
struct NonlinTerm {
    int eps_power = 1;
    int comp = 0;
    C coeff{};
    StateMonomial sm;
    friend bool operator==(const NonlinTerm&, const NonlinTerm&) = default;
};

template <class C>
struct OdeSystem {
    std::string name;
    int n = 1;
    bool second_order = false;
    std::vector<std::vector<C>> G;  // n x n, LHS convention above
    std::vector<NonlinTerm<C>> nonlin;
    std::vector<double> ics;  // n values, then n derivative values if second order
    double epsilon = 0.1;

    friend bool operator==(const OdeSystem&, const OdeSystem&) = default;
};

template <class C>
void validate_system(const OdeSystem<C>& sys) {
    if (sys.n < 1) throw std::invalid_argument("system dimension must be >= 1");
    if (sys.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    if (int(sys.G.size()) != sys.n) throw std::invalid_argument("linear matrix row count != dimension");
    for (const auto& row : sys.G)
        if (int(row.size()) != sys.n) throw std::invalid_argument("linear matrix is not square");
    size_t want_ics = size_t(sys.second_order ? 2 * sys.n : sys.n);
    if (sys.ics.size() != want_ics) throw std::invalid_argument("initial condition count mismatch");
    for (const auto& t : sys.nonlin) {
        if (t.eps_power < 1) throw std::invalid_argument("nonlinear term with eps power < 1");
        if (t.comp < 0 || t.comp >= sys.n) throw std::invalid_argument("nonlinear term component out of range");
        if (int(t.sm.pow.size()) != sys.n) throw std::invalid_argument("state monomial size mismatch");
        if (!t.sm.dpow.empty()) {
            if (!sys.second_order) throw std::invalid_argument("derivative factors need a second-order system");
            if (int(t.sm.dpow.size()) != sys.n) throw std::invalid_argument("derivative monomial size mismatch");
        }
        if (t.sm.degree() < 1) throw std::invalid_argument("nonlinear term with zero state degree");
    }
}

template <class C>
struct Mode {
    int k = 0;                // e^{i k w t}
    std::vector<C> vec;       // eigenvector (kernel of L - ikw, or G - (kw)^2)
    int amp_sym = -1;         // amplitude symbol id
    std::string amp_name;
};

template <class C>
struct ModeData {
    typename coeff_traits<C>::real_type omega{};
    std::vector<Mode<C>> modes;  // k ascending; one per conjugate pair
    SymbolTablePtr tab;          // amplitudes registered with dense ids

    const Mode<C>& by_amp(int sym) const {
        for (const auto& m : modes)
            if (m.amp_sym == sym) return m;
        throw std::out_of_range("no mode for amplitude symbol");
    }
};

namespace detail {

inline std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt sn = boost::multiprecision::sqrt(num), sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

inline Rational rational_gcd(const Rational& a, const Rational& b) {
    BigInt pa = boost::multiprecision::numerator(a), qa = boost::multiprecision::denominator(a);
    BigInt pb = boost::multiprecision::numerator(b), qb = boost::multiprecision::denominator(b);
    return Rational(boost::multiprecision::gcd(pa * qb, pb * qa), qa * qb);
}

// continued-fraction rationalization of x; mode ratios are small integers,
// so a tight denominator cap doubles as the incommensurability test
inline std::pair<long, long> rationalize(double x, double tol = 1e-9, long max_den = 64) {
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        long a = long(std::floor(v));
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = v - double(a);
        if (std::abs(x - double(p1) / double(q1)) < tol) break;
        if (rem < 1e-15) break;
        v = 1.0 / rem;
    }
    return {p1, q1};
}

// positive frequencies of the linear part, exact coefficients
template <class C>
std::vector<typename coeff_traits<C>::real_type> frequencies(const OdeSystem<C>& sys) {
    using RT = typename coeff_traits<C>::real_type;
    std::vector<RT> out;
    if constexpr (coeff_traits<C>::exact) {
        auto imag_zero = [](const C& c) { return c.im == 0; };
        for (const auto& row : sys.G)
            for (const auto& c : row)
                if (!imag_zero(c)) throw std::invalid_argument("complex linear matrix unsupported in exact mode");
        if (sys.second_order) {
            // eigenvalues of G are the squared frequencies
            if (sys.n == 1) {
                auto s = rational_sqrt(sys.G[0][0].re);
                if (!s || *s == 0) throw std::invalid_argument("second-order frequency is not rational");
                out.push_back(*s);
            } else if (sys.n == 2) {
                Rational tr = sys.G[0][0].re + sys.G[1][1].re;
                Rational det = sys.G[0][0].re * sys.G[1][1].re - sys.G[0][1].re * sys.G[1][0].re;
                auto disc = rational_sqrt(tr * tr - 4 * det);
                if (!disc) throw std::invalid_argument("irrational mode frequencies");
                for (Rational lam : {Rational((tr + *disc) / 2), Rational((tr - *disc) / 2)}) {
                    auto s = rational_sqrt(lam);
                    if (!s || *s == 0) throw std::invalid_argument("irrational or zero mode frequency");
                    out.push_back(*s);
                }
                if (out[0] == out[1]) throw std::invalid_argument("degenerate (repeated) frequencies unsupported");
            } else {
                throw std::invalid_argument("exact mode analysis implemented for n <= 2");
            }
        } else {
            // eigenvalues of L = -G must be +- i nu
            if (sys.n == 1) throw std::invalid_argument("scalar first-order system has no oscillator pair");
            if (sys.n != 2) throw std::invalid_argument("exact mode analysis implemented for n <= 2");
            Rational tr = -(sys.G[0][0].re + sys.G[1][1].re);
            Rational det = sys.G[0][0].re * sys.G[1][1].re - sys.G[0][1].re * sys.G[1][0].re;
            if (tr != 0) throw std::invalid_argument("linear part has non-imaginary spectrum");
            auto s = rational_sqrt(det);
            if (!s || *s == 0) throw std::invalid_argument("linear spectrum not +-i w with rational w");
            out.push_back(*s);
        }
    } else {
        if (sys.n == 1 && sys.second_order) {
            double g = sys.G[0][0].v.real();
            if (g <= 0) throw std::invalid_argument("non-oscillatory scalar problem");
            out.push_back(std::sqrt(g));
        } else if (sys.n == 2) {
            std::complex<double> a = sys.G[0][0].v, b = sys.G[0][1].v, c = sys.G[1][0].v, d = sys.G[1][1].v;
            if (sys.second_order) {
                std::complex<double> tr = a + d, det = a * d - b * c;
                std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
                for (std::complex<double> lam : {(tr + disc) / 2.0, (tr - disc) / 2.0}) {
                    if (std::abs(lam.imag()) > 1e-10 || lam.real() <= 0)
                        throw std::invalid_argument("mode frequencies not real positive");
                    out.push_back(std::sqrt(lam.real()));
                }
            } else {
                std::complex<double> tr = -(a + d), det = a * d - b * c;
                if (std::abs(tr) > 1e-10) throw std::invalid_argument("linear part has non-imaginary spectrum");
                if (det.real() <= 0 || std::abs(det.imag()) > 1e-10)
                    throw std::invalid_argument("linear spectrum not +- i w");
                out.push_back(std::sqrt(det.real()));
            }
        } else {
            throw std::invalid_argument("numeric mode analysis implemented for n <= 2");
        }
    }
    return out;
}

template <class C>
std::vector<C> kernel_vector(std::vector<std::vector<C>> M) {
    // kernel of a singular n x n matrix (n <= 2), normalized so the last
    // nonvanishing component is 1
    size_t n = M.size();
    std::vector<C> v;
    if (n == 1) {
        v = {C(1)};
    } else {
        const auto& a = M[0][0];
        const auto& b = M[0][1];
        if (!a.is_zero() || !b.is_zero()) v = {b, -a};
        else v = {M[1][1], -M[1][0]};
        if (v[0].is_zero() && v[1].is_zero()) v = {C(1), C(0)};
    }
    for (size_t i = n; i-- > 0;) {
        if (!v[i].is_zero()) {
            C s = v[i];
            for (auto& x : v) x = x / s;
            break;
        }
    }
    return v;
}

}  // namespace detail

struct ModeOverride {
    int k;
    std::vector<std::pair<std::string, std::string>> vec;  // per-component (re, im) literals
};

template <class C>
ModeData<C> linear_modes(const OdeSystem<C>& sys, const std::vector<ModeOverride>& overrides = {}) {
    using RT = typename coeff_traits<C>::real_type;
    validate_system(sys);
    auto freqs = detail::frequencies(sys);

    ModeData<C> md;
    // base frequency: the gcd-style generator
    std::vector<int> ks;
    if constexpr (coeff_traits<C>::exact) {
        Rational w = freqs[0];
        for (size_t i = 1; i < freqs.size(); ++i) w = detail::rational_gcd(w, freqs[i]);
        for (const Rational& f : freqs) ks.push_back(int(BigInt(Rational(f / w))));
        md.omega = w;
    } else {
        double w = freqs[0];
        std::vector<long> nums(freqs.size(), 1), dens(freqs.size(), 1);
        for (size_t i = 1; i < freqs.size(); ++i) {
            auto [p, q] = detail::rationalize(freqs[i] / freqs[0]);
            if (std::abs(freqs[i] / freqs[0] - double(p) / double(q)) > 1e-9)
                throw std::invalid_argument("incommensurate mode frequencies");
            nums[i] = p;
            dens[i] = q;
        }
        long L = 1;
        for (size_t i = 0; i < freqs.size(); ++i) L = std::lcm(L, dens[i]);
        w = freqs[0] / double(L);
        long g = 0;
        for (size_t i = 0; i < freqs.size(); ++i) g = std::gcd(g, nums[i] * (L / dens[i]));
        w *= double(g);
        for (const double f : freqs) ks.push_back(int(std::llround(f / w)));
        md.omega = w;
    }

    // sort by k ascending, one amplitude per conjugate pair
    std::vector<size_t> idx(freqs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return ks[a] < ks[b]; });

    md.tab = std::make_shared<SymbolTable>();
    for (size_t pos = 0; pos < idx.size(); ++pos) {
        int k = ks[idx[pos]];
        Mode<C> mode;
        mode.k = k;
        mode.amp_name = std::string(1, char('A' + pos));
        // eigenvector
        const ModeOverride* ov = nullptr;
        for (const auto& o : overrides)
            if (o.k == k) ov = &o;
        if (ov) {
            for (auto& [re, im] : ov->vec) {
                if constexpr (coeff_traits<C>::exact)
                    mode.vec.push_back(ExactComplex(rational_from_string(re), rational_from_string(im)));
                else
                    mode.vec.push_back(NumericComplex(std::stod(re), std::stod(im)));
            }
            if (int(mode.vec.size()) != sys.n) throw std::invalid_argument("mode override dimension mismatch");
        } else {
            std::vector<std::vector<C>> M(size_t(sys.n), std::vector<C>(size_t(sys.n)));
            C kw = coeff_traits<C>::from_real(md.omega) * C(k);
            for (int i = 0; i < sys.n; ++i)
                for (int j = 0; j < sys.n; ++j) {
                    // L - ikw = -G - ikw  (first order);  G - (kw)^2 (second order)
                    if (sys.second_order)
                        M[size_t(i)][size_t(j)] = sys.G[size_t(i)][size_t(j)] - (i == j ? kw * kw : C(0));
                    else
                        M[size_t(i)][size_t(j)] = -sys.G[size_t(i)][size_t(j)] - (i == j ? C::i() * kw : C(0));
                }
            mode.vec = detail::kernel_vector(M);
        }
        md.modes.push_back(std::move(mode));
    }
    for (auto& mode : md.modes)
        mode.amp_sym = md.tab->add_amplitude(mode.amp_name, mode.k, int(&mode - md.modes.data()));

    // residual check: L v = i k w v (first order) or G v = (kw)^2 v
    for (const auto& mode : md.modes) {
        C kw = coeff_traits<C>::from_real(md.omega) * C(mode.k);
        for (int i = 0; i < sys.n; ++i) {
            C acc{};
            for (int j = 0; j < sys.n; ++j) acc += sys.G[size_t(i)][size_t(j)] * mode.vec[size_t(j)];
            C want = sys.second_order ? kw * kw * mode.vec[size_t(i)] : -(C::i() * kw) * mode.vec[size_t(i)];
            C diff = acc - want;
            if constexpr (coeff_traits<C>::exact) {
                if (!diff.is_zero()) throw std::logic_error("mode residual nonzero");
            } else {
                if (std::abs(diff.v) > 1e-10) throw std::logic_error("mode residual above 1e-10");
            }
        }
    }
    return md;
}

// ---- Selkov / Hopf preparation -------------------------------------------

struct SelkovPrep {
    double a = 0, b_c = 0, omega = 0;
    double B0[2][2], B1[2][2], B2[2][2];
    double xbar0 = 0, ybar0 = 0, dxbar0 = 1, dybar0 = -1;
};

inline std::pair<SelkovPrep, OdeSystem<NumericComplex>> selkov_prepare(double a, double epsilon,
                                                                       std::vector<double> ics) {
    if (!(a > 0 && a < 0.125)) throw std::invalid_argument("selkov parameter must satisfy 0 < a < 1/8");
    SelkovPrep p;
    p.a = a;
    double root = std::sqrt(1 - 8 * a);
    p.omega = std::sqrt((1 - root) / 2);
    p.b_c = std::sqrt((1 - root - 2 * a) / 2);
    double w2 = p.omega * p.omega;
    double s2 = std::sqrt(2.0), sw = std::sqrt(w2 + 1);
    p.xbar0 = p.omega * sw / s2;
    p.ybar0 = sw / (s2 * p.omega);
    p.dxbar0 = 1;
    p.dybar0 = -1;
    double B0v[2][2] = {{w2, w2}, {-(w2 + 1), -w2}};
    double c1 = s2 * sw / p.omega;
    double B1v[2][2] = {{c1 * (1 - w2), c1 * w2}, {c1 * (w2 - 1), -c1 * w2}};
    double B2v[2][2] = {{(2 * w2 * w2 - w2 - 1) / w2, 1}, {(-2 * w2 * w2 + w2 + 1) / w2, -1}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            p.B0[i][j] = B0v[i][j];
            p.B1[i][j] = B1v[i][j];
            p.B2[i][j] = B2v[i][j];
        }

    OdeSystem<NumericComplex> sys;
    sys.name = "selkov";
    sys.n = 2;
    sys.second_order = false;
    sys.epsilon = epsilon;
    sys.ics = std::move(ics);
    sys.G = {{NumericComplex(-p.B0[0][0]), NumericComplex(-p.B0[0][1])},
             {NumericComplex(-p.B0[1][0]), NumericComplex(-p.B0[1][1])}};
    auto add = [&](int eps_pow, int comp, double coeff, std::vector<int> pow) {
        NonlinTerm<NumericComplex> t;
        t.eps_power = eps_pow;
        t.comp = comp;
        t.coeff = NumericComplex(coeff);
        t.sm.pow = std::move(pow);
        if (coeff != 0.0) sys.nonlin.push_back(std::move(t));
    };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::vector<int> pw(2, 0);
            pw[size_t(j)] = 1;
            add(1, i, p.B1[i][j], pw);
            add(2, i, p.B2[i][j], pw);
        }
    // xi = (1,-1);  eps  (2 xbar0 u v + ybar0 u^2) xi
    //              eps^2 (2 dxbar0 u v + dybar0 u^2 + u^2 v) xi
    for (int i = 0; i < 2; ++i) {
        double s = i == 0 ? 1.0 : -1.0;
        add(1, i, s * 2 * p.xbar0, {1, 1});
        add(1, i, s * p.ybar0, {2, 0});
        add(2, i, s * 2 * p.dxbar0, {1, 1});
        add(2, i, s * p.dybar0, {2, 0});
        add(2, i, s * 1.0, {2, 1});
    }
    validate_system(sys);
    return {p, sys};
}

}  // namespace ampforge
