#pragma once

// Coefficient fields for the expression kernel: exact rational-complex
// numbers and drop-tolerance complex doubles. The kernel is templated on
// the field, so exact problems (rational frequencies) and numeric problems
// (Selkov, where coefficients live in an extension with sqrt(2)) share one
// implementation.

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ampforge {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

inline Rational rational_from_string(const std::string& s) {
    // accepts "p", "p/q" and plain decimals like "-0.25"
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s));
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    BigInt scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt num = BigInt(head) * scale + (tail.empty() ? BigInt(0) : BigInt(tail));
    Rational r(num, scale);
    return neg ? -r : r;
}

inline double to_double(const Rational& q) {
    return static_cast<double>(q);
}

// Exact complex scalar: pair of arbitrary-precision rationals.
struct ExactComplex {
    Rational re{0}, im{0};

    ExactComplex() = default;
    ExactComplex(int r) : re(r) {}
    ExactComplex(long r) : re(r) {}
    ExactComplex(Rational r) : re(std::move(r)) {}
    ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static ExactComplex i() { return ExactComplex(Rational(0), Rational(1)); }
    static ExactComplex from_ratio(long p, long q) { return ExactComplex(Rational(p, q)); }

    bool is_zero() const { return re == 0 && im == 0; }
    ExactComplex conj() const { return {re, -im}; }

    ExactComplex operator-() const { return {-re, -im}; }
    ExactComplex& operator+=(const ExactComplex& o) { re += o.re; im += o.im; return *this; }
    ExactComplex& operator-=(const ExactComplex& o) { re -= o.re; im -= o.im; return *this; }
    friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { a += b; return a; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { a -= b; return a; }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    ExactComplex& operator*=(const ExactComplex& o) { *this = *this * o; return *this; }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
        Rational d = b.re * b.re + b.im * b.im;
        if (d == 0) throw std::domain_error("division by zero coefficient");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

// Floating complex scalar with a drop tolerance used during normalization.
struct NumericComplex {
    std::complex<double> v{0.0, 0.0};

    NumericComplex() = default;
    NumericComplex(int r) : v(double(r), 0.0) {}
    NumericComplex(long r) : v(double(r), 0.0) {}
    NumericComplex(double r) : v(r, 0.0) {}
    NumericComplex(double r, double i) : v(r, i) {}
    NumericComplex(std::complex<double> z) : v(z) {}

    static NumericComplex i() { return NumericComplex(0.0, 1.0); }
    static NumericComplex from_ratio(long p, long q) { return NumericComplex(double(p) / double(q)); }
    static constexpr double drop_tolerance = 1e-10;

    bool is_zero() const { return std::abs(v) < drop_tolerance; }
    NumericComplex conj() const { return {std::conj(v)}; }

    NumericComplex operator-() const { return {-v}; }
    NumericComplex& operator+=(const NumericComplex& o) { v += o.v; return *this; }
    NumericComplex& operator-=(const NumericComplex& o) { v -= o.v; return *this; }
    friend NumericComplex operator+(NumericComplex a, const NumericComplex& b) { a += b; return a; }
    friend NumericComplex operator-(NumericComplex a, const NumericComplex& b) { a -= b; return a; }
    friend NumericComplex operator*(const NumericComplex& a, const NumericComplex& b) { return {a.v * b.v}; }
    NumericComplex& operator*=(const NumericComplex& o) { v *= o.v; return *this; }
    friend NumericComplex operator/(const NumericComplex& a, const NumericComplex& b) { return {a.v / b.v}; }
    friend bool operator==(const NumericComplex& a, const NumericComplex& b) { return a.v == b.v; }
    std::complex<double> to_complex() const { return v; }
};

template <class C>
struct coeff_traits;

template <>
struct coeff_traits<ExactComplex> {
    static constexpr bool exact = true;
    using real_type = Rational;
    static ExactComplex from_real(const Rational& r) { return ExactComplex(r); }
    static ExactComplex from_double(double d) {
        // exact binary expansion of the double
        if (d == 0.0) return ExactComplex();
        int e;
        double m = std::frexp(d, &e);
        BigInt num = BigInt(static_cast<std::int64_t>(std::ldexp(m, 53)));
        e -= 53;
        Rational r(num);
        if (e >= 0) { r *= Rational(BigInt(1) << e); }
        else { r /= Rational(BigInt(1) << (-e)); }
        return ExactComplex(r);
    }
    static std::string re_string(const ExactComplex& c) { return to_string(c.re); }
    static std::string im_string(const ExactComplex& c) { return to_string(c.im); }
    static ExactComplex parse(const std::string& re, const std::string& im) {
        return {rational_from_string(re), rational_from_string(im)};
    }
    static double real_to_double(const Rational& r) { return to_double(r); }
};

template <>
struct coeff_traits<NumericComplex> {
    static constexpr bool exact = false;
    using real_type = double;
    static NumericComplex from_real(double r) { return NumericComplex(r); }
    static NumericComplex from_double(double d) { return NumericComplex(d); }
    static std::string re_string(const NumericComplex& c);
    static std::string im_string(const NumericComplex& c);
    static NumericComplex parse(const std::string& re, const std::string& im) {
        return {std::stod(re), std::stod(im)};
    }
    static double real_to_double(double r) { return r; }
};

// shortest round-trip decimal
inline std::string double_to_string(double d) {
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os.precision(prec);
        os << d;
        if (std::stod(os.str()) == d) return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

inline std::string coeff_traits<NumericComplex>::re_string(const NumericComplex& c) { return double_to_string(c.v.real()); }
inline std::string coeff_traits<NumericComplex>::im_string(const NumericComplex& c) { return double_to_string(c.v.imag()); }

}  // namespace ampforge
