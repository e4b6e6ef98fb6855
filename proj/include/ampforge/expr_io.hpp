#pragma once

// Pretty printing in the notation used for hand calculations
// (e.g. "-3/2*i*eps^2 A^2 A* Log(A) t e^{3it}") and JSON serialization of
// expressions as a term list.

#include "ampforge/symexpr.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>

namespace ampforge {

using ordered_json = nlohmann::ordered_json;

template <class C>
std::string coeff_string(const C& c) {
    std::string re = coeff_traits<C>::re_string(c);
    std::string im = coeff_traits<C>::im_string(c);
    bool has_re = re != "0", has_im = im != "0";
    if (!has_re && !has_im) return "0";
    std::ostringstream os;
    if (has_re && has_im) {
        os << "(" << re << (im[0] == '-' ? "" : "+") << im << "i)";
    } else if (has_re) {
        os << re;
    } else {
        if (im == "1") os << "i";
        else if (im == "-1") os << "-i";
        else os << im << "i";
    }
    return os.str();
}

inline std::string power_string(const std::string& base, int p) {
    if (p == 1) return base;
    return base + "^" + std::to_string(p);
}

template <class C>
std::string to_pretty(const SymExpr<C>& e, const std::string& tvar = "t") {
    if (e.is_zero()) return "0";
    const SymbolTable& tab = *e.table();
    std::ostringstream os;
    bool first = true;
    for (const Term<C>& t : e.terms()) {
        std::string c = coeff_string(t.coeff);
        if (!first) os << (c[0] == '-' ? " - " : " + ");
        else if (c[0] == '-') os << "-";
        first = false;
        std::string mag = c[0] == '-' ? c.substr(1) : c;
        std::ostringstream body;
        for (const Monomial::Entry& en : t.mono.exps) {
            const std::string& n = tab.at(en.sym).name;
            if (en.p != 0) body << " " << power_string(n, en.p);
            if (en.q != 0) body << " " << power_string(n + "*", en.q);
        }
        for (const Monomial::LogEntry& le : t.mono.logs) {
            const std::string& n = tab.at(le.sym).name;
            if (le.r != 0) body << " " << power_string("Log(" + n + ")", le.r);
            if (le.s != 0) body << " " << power_string("Log(" + n + "*)", le.s);
        }
        if (t.m > 0) body << " " << power_string(tvar, t.m);
        if (t.k != 0) {
            body << " e^{";
            if (t.k == 1) body << "i";
            else if (t.k == -1) body << "-i";
            else body << t.k << "i";
            body << tvar << "}";
        }
        if (t.comp != 0) body << " @" << t.comp;
        std::string b = body.str();
        if (b.empty()) os << mag;
        else if (mag == "1") os << b.substr(1);
        else os << mag << b;
    }
    return os.str();
}

template <class C>
ordered_json expr_to_json(const SymExpr<C>& e) {
    ordered_json j;
    j["mode"] = coeff_traits<C>::exact ? "exact" : "numeric";
    ordered_json terms = ordered_json::array();
    const SymbolTable& tab = *e.table();
    for (const Term<C>& t : e.terms()) {
        ordered_json jt;
        jt["coeff_re"] = coeff_traits<C>::re_string(t.coeff);
        jt["coeff_im"] = coeff_traits<C>::im_string(t.coeff);
        jt["m"] = t.m;
        jt["k"] = t.k;
        jt["component"] = t.comp;
        ordered_json ex = ordered_json::object();
        for (const Monomial::Entry& en : t.mono.exps)
            ex[tab.at(en.sym).name] = ordered_json::array({en.p, en.q});
        jt["exponents"] = ex;
        ordered_json lg = ordered_json::object();
        for (const Monomial::LogEntry& le : t.mono.logs)
            lg[tab.at(le.sym).name] = ordered_json::array({le.r, le.s});
        jt["log_powers"] = lg;
        terms.push_back(std::move(jt));
    }
    j["terms"] = std::move(terms);
    return j;
}

template <class C>
SymExpr<C> expr_from_json(const ordered_json& j, SymbolTablePtr tab) {
    std::string mode = j.at("mode").get<std::string>();
    bool exact = mode == "exact";
    if (exact != coeff_traits<C>::exact)
        throw std::invalid_argument("expression mode mismatch: file is " + mode);
    SymExpr<C> e(tab);
    for (const auto& jt : j.at("terms")) {
        Term<C> t;
        t.coeff = coeff_traits<C>::parse(jt.at("coeff_re").get<std::string>(), jt.at("coeff_im").get<std::string>());
        t.m = jt.at("m").get<int>();
        t.k = jt.at("k").get<int>();
        t.comp = jt.at("component").get<int>();
        for (auto it = jt.at("exponents").begin(); it != jt.at("exponents").end(); ++it) {
            int sym = tab->find(it.key());
            if (sym < 0) throw std::invalid_argument("unknown symbol in file: " + it.key());
            t.mono.set_powers(sym, it.value()[0].get<int>(), it.value()[1].get<int>());
        }
        for (auto it = jt.at("log_powers").begin(); it != jt.at("log_powers").end(); ++it) {
            int sym = tab->find(it.key());
            if (sym < 0) throw std::invalid_argument("unknown symbol in file: " + it.key());
            t.mono.add_log(sym, it.value()[0].get<int>(), it.value()[1].get<int>());
        }
        e.push_raw(std::move(t));
    }
    e.normalize();
    return e;
}

}  // namespace ampforge
