#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ppinv/linearized.hpp"
#include "ppinv/poly.hpp"

namespace ppinv {

// f(x) = -x + x^((q^2+1)/2) + x^((q^3+q)/2) over F_{q^3}, q odd. Both f and
// f + x permute; the closed-form inverses compose an inner polynomial with
// the power w = q^3 - q^2 + q, the inverse exponent of (q^2+1)/2.
struct CppParams {
    const FieldCtx* ctx = nullptr;
    std::uint64_t q = 0;
    std::uint64_t e1 = 0;  // (q^2+1)/2
    std::uint64_t e2 = 0;  // (q^3+q)/2
    std::uint64_t w = 0;   // q^3 - q^2 + q
};

inline CppParams make_cpp_params(const FieldCtx& ctx) {
    if (ctx.n() != 3) throw std::invalid_argument("cpp family: field must be F_{q^3}");
    if (ctx.p() == 2) throw std::invalid_argument("cpp family: q must be odd");
    CppParams P;
    P.ctx = &ctx;
    P.q = ctx.q();
    P.e1 = (P.q * P.q + 1) / 2;
    P.e2 = (P.q * P.q * P.q + P.q) / 2;
    P.w = P.q * P.q * P.q - P.q * P.q + P.q;
    // w * e1 == 1 (mod q^3 - 1); an identity of the exponents, not an input check
    if ((Bigint(P.w) * Bigint(P.e1)).mod_u64(P.q * P.q * P.q - 1) != 1) {
        throw std::logic_error("cpp family: exponent identity w*e1 = 1 failed");
    }
    return P;
}

inline SparsePoly build_f(const CppParams& P) {
    const FieldCtx& ctx = *P.ctx;
    SparsePoly f = SparsePoly::monomial(ctx, Bigint(P.e1), ctx.one());
    f.add_term(Bigint(P.e2), ctx.one());
    f.add_term(1, ctx.from_int(-1));
    return f;
}

inline SparsePoly build_f_plus_x(const CppParams& P) {
    const FieldCtx& ctx = *P.ctx;
    SparsePoly f = SparsePoly::monomial(ctx, Bigint(P.e1), ctx.one());
    f.add_term(Bigint(P.e2), ctx.one());
    return f;
}

// (x - x^q + x^(q^2)) / 2, the compositional inverse of g(x) = x + x^q
inline SparsePoly inner_g_inverse(const CppParams& P) {
    const FieldCtx& ctx = *P.ctx;
    FieldElement half = ctx.inv(ctx.from_int(2));
    SparsePoly r = SparsePoly::monomial(ctx, 1, half);
    r.add_term(Bigint(P.q), ctx.neg(half));
    r.add_term(Bigint(P.q * P.q), half);
    return r;
}

// h(x) = x + x^q - x^(1+q-q^2); f = h o x^e1. The negative exponent is
// stored reduced with value 0 at x = 0, matching where h is applied.
inline SparsePoly h_factor(const CppParams& P) {
    const FieldCtx& ctx = *P.ctx;
    SparsePoly h = SparsePoly::identity(ctx);
    h.add_term(Bigint(P.q), ctx.one());
    Bigint e = Bigint(1) + Bigint(P.q) - Bigint(P.q) * Bigint(P.q);
    h.add_term(e, ctx.from_int(-1));
    return h;
}

// Unique solution of a^q x^q + a^(q^2) x - 2 = 0 for a != 0:
// x = a^-(q^2+q+1) (a^(q+1) - a^(2q) + a^(q^2+q)). Substitution and the
// nonsingularity of the underlying linearized map are both asserted.
inline FieldElement affine_twist_root(const FieldCtx& ctx, const FieldElement& a) {
    if (ctx.n() != 3) throw std::invalid_argument("affine_twist_root: field must be F_{q^3}");
    if (ctx.is_zero(a)) throw std::invalid_argument("affine_twist_root: a must be nonzero");
    const std::uint64_t q = ctx.q();
    FieldElement num = ctx.sub(ctx.pow_u64(a, q + 1), ctx.pow_u64(a, 2 * q));
    num = ctx.add(num, ctx.pow_u64(a, q * q + q));
    FieldElement root = ctx.mul(ctx.pow_big(a, -Bigint(q * q + q + 1)), num);
    FieldElement aq = ctx.frobenius_q(a, 1);
    FieldElement aq2 = ctx.frobenius_q(a, 2);
    FieldElement lhs = ctx.add(ctx.mul(aq, ctx.frobenius_q(root, 1)), ctx.mul(aq2, root));
    if (!(lhs == ctx.from_int(2))) {
        throw std::logic_error("affine_twist_root: formula does not satisfy the equation");
    }
    LinearizedPoly L = linearized(ctx, {aq2, aq, ctx.zero()});
    if (ctx.is_zero(det(dickson(L)))) {
        throw std::logic_error("affine_twist_root: associated linearized map is singular");
    }
    return root;
}

namespace detail {

inline void validate_against_brute(const EvalMap& closed, const SparsePoly& forward,
                                   const FieldCtx& ctx, const char* what) {
    ValueTable tab = permutation_check(forward);
    if (!tab.bijective) {
        throw std::runtime_error(std::string(what) + ": forward map is not a bijection");
    }
    ValueTable inv = invert_table(tab);
    auto mismatch = first_mismatch(closed, as_map(inv), ctx);
    if (mismatch) {
        throw std::runtime_error(std::string(what) + ": closed form disagrees with the brute-force inverse at index " +
                                 std::to_string(*mismatch));
    }
}

}  // namespace detail

// (f + x)^{-1} = ((x - x^q + x^(q^2))/2)^w, validated pointwise
inline EvalMap inverse_f_plus_x(const CppParams& P) {
    const FieldCtx* ctx = P.ctx;
    SparsePoly inner = inner_g_inverse(P);
    const std::uint64_t w = P.w;
    EvalMap map = [ctx, inner, w](const FieldElement& y) { return ctx->pow_u64(inner.eval(y), w); };
    detail::validate_against_brute(map, build_f_plus_x(P), *ctx, "inverse_f_plus_x");
    return map;
}

// f^{-1} = (x^(q^2+q+1) (x^(q+1) - x^(2q) + x^(q^2+q))^(q^3-2))^w with value
// 0 at 0 (0 is the unique root of f), validated pointwise
inline EvalMap inverse_f(const CppParams& P) {
    const FieldCtx* ctx = P.ctx;
    const std::uint64_t q = P.q;
    const std::uint64_t w = P.w;
    EvalMap map = [ctx, q, w](const FieldElement& y) {
        if (ctx->is_zero(y)) return ctx->zero();
        FieldElement base = ctx->sub(ctx->pow_u64(y, q + 1), ctx->pow_u64(y, 2 * q));
        base = ctx->add(base, ctx->pow_u64(y, q * q + q));
        FieldElement t = ctx->mul(ctx->pow_u64(y, q * q + q + 1),
                                  ctx->pow_u64(base, q * q * q - 2));
        return ctx->pow_u64(t, w);
    };
    detail::validate_against_brute(map, build_f(P), *ctx, "inverse_f");
    return map;
}

}  // namespace ppinv
