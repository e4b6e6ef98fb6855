#pragma once

// Symbol table shared by all expressions of one problem. Four kinds of
// multiplicative symbols live in monomials:
//   amplitude      A_j, paired with its conjugate via the q-exponent
//   free_function  the homogeneous functions alpha, beta, ... promoted to
//                  functions of the amplitudes (opaque until the reducer
//                  substitutes an ansatz)
//   partial        formal first partials d(alpha)/dA_j etc., also opaque
//   constant       complex free constants of an ansatz (c0, d1, a(1,1,0), ...)
//
// Every symbol carries an integer frequency multiplier k: the weight of a
// monomial is sum k_s (p_s - q_s), which drives resonance bookkeeping and
// the detrend phases. Amplitudes have k = mode multiplier, functions have
// k of their target mode, a partial d f/dA has k_f - k_A (and df/dA* has
// k_f + k_A), constants have k = 0.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ampforge {

enum class SymbolKind { amplitude, free_function, partial, constant };

struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::amplitude;
    int k = 0;           // frequency multiplier of the unconjugated symbol
    int order = 0;       // epsilon order the symbol was introduced at (functions/constants)
    int mode = -1;       // target mode index (amplitudes / functions / constants)
    int func = -1;       // partial: id of the function symbol
    int wrt = -1;        // partial: id of the amplitude differentiated against
    bool wrt_conj = false;  // partial taken w.r.t. the conjugated amplitude
};

class SymbolTable {
public:
    int add(Symbol s) {
        syms_.push_back(std::move(s));
        return int(syms_.size()) - 1;
    }
    const Symbol& at(int id) const { return syms_.at(size_t(id)); }
    int size() const { return int(syms_.size()); }

    int add_amplitude(const std::string& name, int k, int mode) {
        Symbol s;
        s.name = name;
        s.kind = SymbolKind::amplitude;
        s.k = k;
        s.mode = mode;
        if (int(syms_.size()) != n_amplitudes_)
            throw std::logic_error("amplitudes must be registered first (dense ids)");
        ++n_amplitudes_;
        return add(std::move(s));
    }
    int add_function(const std::string& name, int k, int order, int mode) {
        Symbol s;
        s.name = name;
        s.kind = SymbolKind::free_function;
        s.k = k;
        s.order = order;
        s.mode = mode;
        return add(std::move(s));
    }
    int add_partial(int func_id, int wrt_id, bool wrt_conj) {
        const Symbol& f = at(func_id);
        const Symbol& a = at(wrt_id);
        Symbol s;
        s.name = "d" + std::string(wrt_conj ? "c" : "") + a.name + "[" + f.name + "]";
        s.kind = SymbolKind::partial;
        s.k = wrt_conj ? f.k + a.k : f.k - a.k;
        s.order = f.order;
        s.func = func_id;
        s.wrt = wrt_id;
        s.wrt_conj = wrt_conj;
        return add(std::move(s));
    }
    int add_constant(const std::string& name, int order, int mode) {
        Symbol s;
        s.name = name;
        s.kind = SymbolKind::constant;
        s.k = 0;
        s.order = order;
        s.mode = mode;
        return add(std::move(s));
    }

    int n_amplitudes() const { return n_amplitudes_; }

    int find(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (syms_[size_t(i)].name == name) return i;
        return -1;
    }
    // id of the formal partial, creating it on demand
    int partial_id(int func_id, int wrt_id, bool wrt_conj) {
        for (int i = 0; i < size(); ++i) {
            const Symbol& s = syms_[size_t(i)];
            if (s.kind == SymbolKind::partial && s.func == func_id && s.wrt == wrt_id &&
                s.wrt_conj == wrt_conj)
                return i;
        }
        return add_partial(func_id, wrt_id, wrt_conj);
    }

private:
    std::vector<Symbol> syms_;
    int n_amplitudes_ = 0;
};

using SymbolTablePtr = std::shared_ptr<SymbolTable>;

}  // namespace ampforge
