#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ppinv/gf.hpp"

namespace ppinv {

// Sparse polynomial over F_{q^n}: finite exponent -> nonzero coefficient map.
// Exponents arrive as arbitrary-precision integers (negative allowed) and are
// stored canonically: 0 stays 0, everything else reduces into [1, q^n-1].
// That reduction preserves the induced map on the whole field, including the
// value 0 at x = 0 for originally negative exponents.
class SparsePoly {
public:
    explicit SparsePoly(const FieldCtx& ctx) : ctx_(&ctx) {}

    const FieldCtx& ctx() const { return *ctx_; }
    const std::map<Bigint, FieldElement>& terms() const { return terms_; }

    Bigint canonical_exponent(const Bigint& e) const {
        if (e.is_zero()) return Bigint(0);
        std::uint64_t m = ctx_->size() - 1;
        std::uint64_t r = e.mod_u64(m);
        return Bigint(r == 0 ? m : r);
    }

    void add_term(const Bigint& exp, const FieldElement& coeff) {
        if (ctx_->is_zero(coeff)) return;
        Bigint key = canonical_exponent(exp);
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), coeff);
        } else {
            it->second = ctx_->add(it->second, coeff);
            if (ctx_->is_zero(it->second)) terms_.erase(it);
        }
    }

    static SparsePoly monomial(const FieldCtx& ctx, const Bigint& exp, const FieldElement& coeff) {
        SparsePoly r(ctx);
        r.add_term(exp, coeff);
        return r;
    }

    static SparsePoly identity(const FieldCtx& ctx) { return monomial(ctx, 1, ctx.one()); }

    static SparsePoly constant(const FieldCtx& ctx, const FieldElement& c) {
        return monomial(ctx, 0, c);
    }

    friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
        SparsePoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) {
        SparsePoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, b.ctx_->neg(c));
        return r;
    }

    SparsePoly operator-() const {
        SparsePoly r(*ctx_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, ctx_->neg(c));
        return r;
    }

    SparsePoly scaled(const FieldElement& s) const {
        SparsePoly r(*ctx_);
        if (ctx_->is_zero(s)) return r;
        for (const auto& [e, c] : terms_) r.add_term(e, ctx_->mul(c, s));
        return r;
    }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        SparsePoly r(*a.ctx_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                r.add_term(ea + eb, a.ctx_->mul(ca, cb));
            }
        }
        return r;
    }

    SparsePoly pow(std::uint64_t k) const {
        SparsePoly r = constant(*ctx_, ctx_->one());
        SparsePoly base = *this;
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    // Canonical exponents fit u64, so each monomial is a plain power; a zero
    // base with positive exponent contributes 0 and the constant term is
    // added at every point including 0.
    FieldElement eval(const FieldElement& x) const {
        FieldElement acc = ctx_->zero();
        for (const auto& [e, c] : terms_) {
            if (e.is_zero()) {
                acc = ctx_->add(acc, c);
            } else {
                acc = ctx_->add(acc, ctx_->mul(c, ctx_->pow_u64(x, e.to_u64())));
            }
        }
        return acc;
    }

    bool operator==(const SparsePoly& o) const { return terms_ == o.terms_; }

private:
    const FieldCtx* ctx_;
    std::map<Bigint, FieldElement> terms_;
};

using EvalMap = std::function<FieldElement(const FieldElement&)>;

inline EvalMap as_map(const SparsePoly& p) {
    return [p](const FieldElement& x) { return p.eval(x); };
}

inline EvalMap identity_map(const FieldCtx&) {
    return [](const FieldElement& x) { return x; };
}

// x -> f(g(x))
inline EvalMap compose(EvalMap f, EvalMap g) {
    return [f = std::move(f), g = std::move(g)](const FieldElement& x) { return f(g(x)); };
}

// Image of a map in enumeration order plus its bijectivity verdict; the
// ground truth every criterion is checked against.
struct ValueTable {
    const FieldCtx* ctx = nullptr;
    std::vector<std::uint64_t> image;  // image[i] = index of value at element(i)
    bool bijective = false;
};

inline ValueTable tabulate(const FieldCtx& ctx, const EvalMap& f) {
    ValueTable t;
    t.ctx = &ctx;
    t.image.resize(ctx.size());
    std::vector<std::uint8_t> seen(ctx.size(), 0);
    bool distinct = true;
    for (std::uint64_t i = 0; i < ctx.size(); ++i) {
        std::uint64_t v = ctx.index_of(f(ctx.element(i)));
        t.image[i] = v;
        if (seen[v]) distinct = false;
        seen[v] = 1;
    }
    t.bijective = distinct;
    return t;
}

inline ValueTable permutation_check(const SparsePoly& p) { return tabulate(p.ctx(), as_map(p)); }

inline ValueTable invert_table(const ValueTable& t) {
    if (!t.bijective) throw std::domain_error("ValueTable: cannot invert a non-bijective table");
    ValueTable r;
    r.ctx = t.ctx;
    r.image.resize(t.image.size());
    for (std::uint64_t i = 0; i < t.image.size(); ++i) r.image[t.image[i]] = i;
    r.bijective = true;
    return r;
}

inline ValueTable brute_inverse(const SparsePoly& p) { return invert_table(permutation_check(p)); }

inline EvalMap as_map(const ValueTable& t) {
    const FieldCtx* ctx = t.ctx;
    return [ctx, image = t.image](const FieldElement& x) {
        return ctx->element(image[ctx->index_of(x)]);
    };
}

inline std::optional<std::uint64_t> first_mismatch(const EvalMap& lhs, const EvalMap& rhs,
                                                   const FieldCtx& ctx) {
    for (std::uint64_t i = 0; i < ctx.size(); ++i) {
        FieldElement x = ctx.element(i);
        if (!(lhs(x) == rhs(x))) return i;
    }
    return std::nullopt;
}

// Exhaustive pointwise equality; the single primitive behind every
// commuting-diagram check and inverse validation.
inline bool verify_identity(const EvalMap& lhs, const EvalMap& rhs, const FieldCtx& ctx) {
    return !first_mismatch(lhs, rhs, ctx).has_value();
}

// Unique polynomial of degree < q^n with the table's values. Uses the
// product-rule shortcut m'(a) = -1 for m(x) = x^(q^n) - x, so each basis
// polynomial is a synthetic division away. Display aid; the table stays
// authoritative.
inline SparsePoly lagrange_interpolate(const ValueTable& t) {
    const FieldCtx& ctx = *t.ctx;
    const std::uint64_t sz = ctx.size();
    std::vector<FieldElement> dense(sz, ctx.zero());
    std::vector<FieldElement> quot(sz);
    for (std::uint64_t ai = 0; ai < sz; ++ai) {
        FieldElement v = ctx.element(t.image[ai]);
        if (ctx.is_zero(v)) continue;
        FieldElement a = ctx.element(ai);
        // q(x) = (x^sz - x) / (x - a) by synthetic division, high to low
        FieldElement carry = ctx.one();  // coefficient of x^(sz-1)
        quot[sz - 1] = carry;
        for (std::uint64_t d = sz - 1; d-- > 0;) {
            FieldElement coeff = d == 0 ? ctx.from_int(-1) : ctx.zero();
            carry = ctx.add(coeff, ctx.mul(a, carry));
            quot[d] = carry;
        }
        // Lagrange basis at a is -q(x); accumulate v * (-q)
        FieldElement vneg = ctx.neg(v);
        for (std::uint64_t d = 0; d < sz; ++d) {
            dense[d] = ctx.add(dense[d], ctx.mul(vneg, quot[d]));
        }
    }
    SparsePoly out(ctx);
    for (std::uint64_t d = 0; d < sz; ++d) out.add_term(Bigint(d), dense[d]);
    return out;
}

}  // namespace ppinv
