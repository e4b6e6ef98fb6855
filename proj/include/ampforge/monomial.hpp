#pragma once

// Monomial over the symbol table: product of sym^p * conj(sym)^q factors
// (integer exponents, negative allowed) and Log(sym)^r Log(conj sym)^s
// factors (nonnegative, amplitudes only). Canonical form holds entries
// sorted by symbol id with zero entries removed.

#include "ampforge/symbols.hpp"

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <vector>

namespace ampforge {

struct Monomial {
    struct Entry {
        int sym = 0;
        int p = 0;  // power of the symbol
        int q = 0;  // power of its conjugate
        friend bool operator==(const Entry&, const Entry&) = default;
        friend auto operator<=>(const Entry&, const Entry&) = default;
    };
    struct LogEntry {
        int sym = 0;
        int r = 0;  // Log(sym)^r
        int s = 0;  // Log(conj sym)^s
        friend bool operator==(const LogEntry&, const LogEntry&) = default;
        friend auto operator<=>(const LogEntry&, const LogEntry&) = default;
    };

    std::vector<Entry> exps;
    std::vector<LogEntry> logs;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    bool is_one() const { return exps.empty() && logs.empty(); }
    bool has_logs() const { return !logs.empty(); }

    std::pair<int, int> powers(int sym) const {
        for (const Entry& e : exps)
            if (e.sym == sym) return {e.p, e.q};
        return {0, 0};
    }

    void set_powers(int sym, int p, int q) {
        auto it = std::find_if(exps.begin(), exps.end(), [&](const Entry& e) { return e.sym == sym; });
        if (it != exps.end()) {
            if (p == 0 && q == 0) exps.erase(it);
            else { it->p = p; it->q = q; }
        } else if (p != 0 || q != 0) {
            exps.push_back({sym, p, q});
            std::sort(exps.begin(), exps.end(), [](const Entry& a, const Entry& b) { return a.sym < b.sym; });
        }
    }

    void add_log(int sym, int r, int s) {
        auto it = std::find_if(logs.begin(), logs.end(), [&](const LogEntry& e) { return e.sym == sym; });
        if (it != logs.end()) {
            it->r += r;
            it->s += s;
            if (it->r == 0 && it->s == 0) logs.erase(it);
        } else if (r != 0 || s != 0) {
            logs.push_back({sym, r, s});
            std::sort(logs.begin(), logs.end(), [](const LogEntry& a, const LogEntry& b) { return a.sym < b.sym; });
        }
    }

    static Monomial one() { return {}; }

    static Monomial power(int sym, int p, int q = 0) {
        Monomial m;
        if (p != 0 || q != 0) m.exps.push_back({sym, p, q});
        return m;
    }

    Monomial times(const Monomial& o) const {
        Monomial out;
        out.exps.reserve(exps.size() + o.exps.size());
        size_t i = 0, j = 0;
        while (i < exps.size() || j < o.exps.size()) {
            if (j == o.exps.size() || (i < exps.size() && exps[i].sym < o.exps[j].sym)) {
                out.exps.push_back(exps[i++]);
            } else if (i == exps.size() || o.exps[j].sym < exps[i].sym) {
                out.exps.push_back(o.exps[j++]);
            } else {
                Entry e{exps[i].sym, exps[i].p + o.exps[j].p, exps[i].q + o.exps[j].q};
                if (e.p != 0 || e.q != 0) out.exps.push_back(e);
                ++i;
                ++j;
            }
        }
        out.logs.reserve(logs.size() + o.logs.size());
        i = j = 0;
        while (i < logs.size() || j < o.logs.size()) {
            if (j == o.logs.size() || (i < logs.size() && logs[i].sym < o.logs[j].sym)) {
                out.logs.push_back(logs[i++]);
            } else if (i == logs.size() || o.logs[j].sym < logs[i].sym) {
                out.logs.push_back(o.logs[j++]);
            } else {
                LogEntry e{logs[i].sym, logs[i].r + o.logs[j].r, logs[i].s + o.logs[j].s};
                if (e.r != 0 || e.s != 0) out.logs.push_back(e);
                ++i;
                ++j;
            }
        }
        return out;
    }

    Monomial conj() const {
        Monomial out = *this;
        for (Entry& e : out.exps) std::swap(e.p, e.q);
        for (LogEntry& e : out.logs) std::swap(e.r, e.s);
        return out;
    }

    // weight = sum k_s (p_s - q_s); Log factors carry no weight
    int weight(const SymbolTable& tab) const {
        int w = 0;
        for (const Entry& e : exps) w += tab.at(e.sym).k * (e.p - e.q);
        return w;
    }

    // total |exponent| over amplitude symbols only (tie-break metric)
    int amplitude_degree(const SymbolTable& tab) const {
        int d = 0;
        for (const Entry& e : exps)
            if (tab.at(e.sym).kind == SymbolKind::amplitude) d += std::abs(e.p) + std::abs(e.q);
        return d;
    }

    bool contains_kind(const SymbolTable& tab, SymbolKind kind) const {
        for (const Entry& e : exps)
            if (tab.at(e.sym).kind == kind) return true;
        return false;
    }

    int total_log_degree() const {
        int d = 0;
        for (const LogEntry& e : logs) d += e.r + e.s;
        return d;
    }

    // split into (amplitude & log part, everything else)
    std::pair<Monomial, Monomial> split_amplitude_part(const SymbolTable& tab) const {
        Monomial amp, rest;
        for (const Entry& e : exps) {
            if (tab.at(e.sym).kind == SymbolKind::amplitude) amp.exps.push_back(e);
            else rest.exps.push_back(e);
        }
        amp.logs = logs;  // logs attach to amplitudes only
        return {amp, rest};
    }
};

}  // namespace ampforge
