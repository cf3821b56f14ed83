#pragma once

#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppinv/family_quadratic.hpp"  // detail::inv_mod_u64
#include "ppinv/linearized.hpp"
#include "ppinv/poly.hpp"

namespace ppinv {

// f(x) = A(x)^m + L(x) over F_{q^n}, n >= 2, where A is the structured
// rank-one linearized polynomial attached to a norm-one b and L is a
// non-permutation linearized polynomial.
struct AmlParams {
    const FieldCtx* ctx = nullptr;
    FieldElement b;  // norm 1
    std::uint64_t m = 0;
    LinearizedPoly L;
    LinearizedPoly A;  // derived from b
};

// all b of norm 1, i.e. g^((q-1)t) for t = 0 .. (q^n-1)/(q-1) - 1
inline std::vector<FieldElement> enumerate_norm_one_b(const FieldCtx& ctx) {
    const std::uint64_t count = (ctx.size() - 1) / (ctx.q() - 1);
    FieldElement step = ctx.pow_u64(ctx.generator(), ctx.q() - 1);
    std::vector<FieldElement> out;
    out.reserve(count);
    FieldElement b = ctx.one();
    for (std::uint64_t t = 0; t < count; ++t) {
        out.push_back(b);
        b = ctx.mul(b, step);
    }
    return out;
}

// A(x) = x^(q^(n-1)) + b x^(q^(n-2)) + ... + b^(1+sum_{i=1}^{n-2} q^(n-i)) x.
// Asserts A(x)^q = b^q A(x) on the whole field; the identity requires b to
// have norm 1.
inline LinearizedPoly build_A(const FieldCtx& ctx, const FieldElement& b) {
    if (ctx.n() < 2) throw std::invalid_argument("build_A: need n >= 2");
    if (!(ctx.norm_to_subfield(b) == ctx.one())) {
        throw std::invalid_argument("build_A: b must have norm 1 to the q-subfield");
    }
    const std::uint32_t n = ctx.n();
    std::vector<FieldElement> coeffs(n, ctx.zero());
    coeffs[n - 1] = ctx.one();
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        // exponent 1 + sum_{t=1}^{n-2-i} q^(n-t)
        std::uint64_t exp = 1;
        std::uint64_t qpow = ctx.size() / ctx.q();  // q^(n-1)
        for (std::uint32_t t = 1; t <= n - 2 - i; ++t) {
            exp += qpow;
            qpow /= ctx.q();
        }
        coeffs[i] = ctx.pow_u64(b, exp);
    }
    LinearizedPoly A = linearized(ctx, std::move(coeffs));
    FieldElement bq = ctx.frobenius_q(b, 1);
    for (std::uint64_t idx = 0; idx < ctx.size(); ++idx) {
        FieldElement ax = eval(A, ctx.element(idx));
        if (!(ctx.frobenius_q(ax, 1) == ctx.mul(bq, ax))) {
            throw std::logic_error("build_A: A(x)^q != b^q A(x)");
        }
    }
    return A;
}

inline AmlParams make_aml_params(const FieldCtx& ctx, const FieldElement& b, std::uint64_t m,
                                 LinearizedPoly L) {
    if (m == 0) throw std::invalid_argument("aml family: m must be positive");
    AmlParams P;
    P.ctx = &ctx;
    P.b = b;
    P.m = m;
    P.A = build_A(ctx, b);
    P.L = std::move(L);
    return P;
}

// true iff Im(A^m) is a one-dimensional F_q-subspace (enumerated, not
// inferred from gcd; tests cross-check the two)
inline bool image_power_dimension(const LinearizedPoly& A, std::uint64_t m) {
    const FieldCtx& ctx = *A.ctx;
    std::vector<std::uint8_t> in_img(ctx.size(), 0);
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < ctx.size(); ++i) {
        std::uint64_t v = ctx.index_of(ctx.pow_u64(eval(A, ctx.element(i)), m));
        if (!in_img[v]) {
            in_img[v] = 1;
            ++count;
        }
    }
    if (count != ctx.q()) return false;
    std::vector<FieldElement> subfield = ctx.subfield_q_elements();
    for (std::uint64_t i = 0; i < ctx.size(); ++i) {
        if (!in_img[i]) continue;
        FieldElement y = ctx.element(i);
        for (const FieldElement& c : subfield) {
            if (!in_img[ctx.index_of(ctx.mul(c, y))]) return false;
        }
    }
    return true;
}

// Column 0 carries A's coefficients (ascending q-power); columns 1..n-1 are
// the first n-1 rows of L's Dickson matrix, transposed.
inline Matrix build_B(const LinearizedPoly& A, const LinearizedPoly& L) {
    const FieldCtx& ctx = *A.ctx;
    const std::size_t n = ctx.n();
    DicksonMatrix D = dickson(L);
    Matrix B(ctx, n, n);
    for (std::size_t r = 0; r < n; ++r) {
        B.at(r, 0) = A.coeffs[r];
        for (std::size_t c = 1; c < n; ++c) B.at(r, c) = D.at(c - 1, r);
    }
    return B;
}

struct AmlExponents {
    std::uint64_t u = 0;  // least positive with m u = 1 (mod q-1)
    std::uint64_t v = 0;  // m u = 1 + v (q-1) (mod q^n-1), least non-negative
};

inline AmlExponents solve_exponents(std::uint64_t m, std::uint64_t q, std::uint64_t order) {
    const std::uint64_t qm1 = q - 1;
    if (std::gcd(m, qm1) != 1) throw std::invalid_argument("solve_exponents: gcd(m, q-1) != 1");
    std::uint64_t u = qm1 == 1 ? 1 : detail::inv_mod_u64(m % qm1, qm1);
    unsigned __int128 witness = (static_cast<unsigned __int128>(m) * u - 1) / qm1;
    std::uint64_t v = static_cast<std::uint64_t>(witness % (order / qm1));
    return AmlExponents{u, v};
}

struct AmlCriterion {
    bool gcd_ok = false;
    std::size_t rank = 0;
    bool rank_ok = false;  // rank(D) == n-1
    bool have_alpha = false;
    std::vector<FieldElement> alpha;  // kernel of D^T, canonical; set iff rank_ok
    FieldElement s;                   // set iff rank_ok
    bool s_nonzero = false;
    FieldElement det_B;
    bool det_B_nonzero = false;
    bool is_permutation = false;
};

// Criterion verdict: gcd(m, q-1) = 1, rank(D) = n-1, s != 0, det(B) != 0.
// Requires a non-permutation L; a nonsingular Dickson matrix is rejected.
inline AmlCriterion criterion(const AmlParams& P) {
    const FieldCtx& ctx = *P.ctx;
    const std::size_t n = ctx.n();
    DicksonMatrix D = dickson(P.L);
    DetRank dr = det_rank(D);
    if (!ctx.is_zero(dr.det)) {
        throw std::invalid_argument("aml criterion: L is a linearized permutation; the construction requires a non-permutation L");
    }
    AmlCriterion out;
    out.gcd_ok = std::gcd(P.m, ctx.q() - 1) == 1;
    out.rank = dr.rank;
    out.rank_ok = dr.rank == n - 1;
    out.det_B = det(build_B(P.A, P.L));
    out.det_B_nonzero = !ctx.is_zero(out.det_B);
    out.s = ctx.zero();
    if (out.rank_ok) {
        out.alpha = nullspace_vec(transpose(D));
        out.have_alpha = true;
        // s = sum_j alpha_j b^(m (q + q^2 + ... + q^(j-1)))
        FieldElement s = ctx.zero();
        std::uint64_t sumq = 0;
        std::uint64_t qpow = ctx.q();
        for (std::size_t j = 0; j < n; ++j) {
            FieldElement bp = ctx.pow_big(P.b, Bigint(P.m) * Bigint(sumq));
            s = ctx.add(s, ctx.mul(out.alpha[j], bp));
            sumq += qpow;
            qpow *= ctx.q();
        }
        out.s = s;
        out.s_nonzero = !ctx.is_zero(s);
    }
    out.is_permutation = out.gcd_ok && out.rank_ok && out.s_nonzero && out.det_B_nonzero;
    return out;
}

inline SparsePoly build_f(const AmlParams& P) {
    return to_sparse(P.A).pow(P.m) + to_sparse(P.L);
}

struct AmlInverse {
    EvalMap map;
    std::vector<FieldElement> beta;
    AmlExponents uv;
};

// f^{-1}(x) = beta_1 b^(-qv) s^(-u) psi1(x)^u
//           + (beta_2 x + ... + beta_n x^(q^(n-2))) o
//             (x - b^(-qvm) s^(-um) psi1(x)^(um)),
// psi1(x) = alpha_1 x + alpha_2 x^q + ... + alpha_n x^(q^(n-1)).
// Validated pointwise against the brute-force inverse; a failure dumps every
// intermediate quantity.
inline AmlInverse inverse(const AmlParams& P, const AmlCriterion& crit) {
    const FieldCtx& ctx = *P.ctx;
    if (!crit.is_permutation || !crit.have_alpha) {
        throw std::invalid_argument("aml inverse: criterion verdict is not PERMUTATION");
    }
    const std::size_t n = ctx.n();
    Matrix B = build_B(P.A, P.L);
    std::vector<FieldElement> rhs(n, ctx.zero());
    rhs[0] = ctx.one();
    std::vector<FieldElement> beta = solve_unique(B, rhs);
    AmlExponents uv = solve_exponents(P.m, ctx.q(), ctx.size() - 1);

    Bigint qv = Bigint(ctx.q()) * Bigint(uv.v);
    FieldElement c1 = ctx.mul(beta[0], ctx.mul(ctx.pow_big(P.b, -qv),
                                               ctx.pow_big(crit.s, -Bigint(uv.u))));
    FieldElement c2 = ctx.mul(ctx.pow_big(P.b, -(qv * Bigint(P.m))),
                              ctx.pow_big(crit.s, -(Bigint(uv.u) * Bigint(P.m))));
    // psi1 powers keep a positive exponent so that psi1(y) = 0 maps to 0
    const std::uint64_t ord = ctx.size() - 1;
    std::uint64_t eu = uv.u % ord;
    if (eu == 0) eu = ord;
    std::uint64_t eum = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(uv.u) * P.m) % ord);
    if (eum == 0) eum = ord;

    LinearizedPoly psi1 = linearized(ctx, crit.alpha);
    const FieldCtx* cp = &ctx;
    EvalMap map = [cp, psi1, beta, c1, c2, eu, eum, n](const FieldElement& y) {
        FieldElement t = eval(psi1, y);
        FieldElement part1 = cp->mul(c1, cp->pow_u64(t, eu));
        FieldElement arg = cp->sub(y, cp->mul(c2, cp->pow_u64(t, eum)));
        FieldElement part2 = cp->zero();
        for (std::size_t j = 0; j + 1 < n; ++j) {
            part2 = cp->add(part2, cp->mul(beta[j + 1], cp->frobenius_q(arg, j)));
        }
        return cp->add(part1, part2);
    };

    SparsePoly f = build_f(P);
    ValueTable tab = permutation_check(f);
    auto dump = [&](const std::string& reason) {
        std::ostringstream os;
        os << "aml inverse validation failed: " << reason;
        os << "\n  b = " << ctx.to_string(P.b) << "  m = " << P.m;
        os << "\n  L = ";
        for (std::size_t i = 0; i < n; ++i) os << (i ? "; " : "") << ctx.to_string(P.L.coeffs[i]);
        os << "\n  alpha = ";
        for (std::size_t i = 0; i < n; ++i) os << (i ? "; " : "") << ctx.to_string(crit.alpha[i]);
        os << "\n  beta = ";
        for (std::size_t i = 0; i < n; ++i) os << (i ? "; " : "") << ctx.to_string(beta[i]);
        os << "\n  s = " << ctx.to_string(crit.s) << "  det(B) = " << ctx.to_string(crit.det_B);
        os << "\n  u = " << uv.u << "  v = " << uv.v;
        return os.str();
    };
    if (!tab.bijective) throw std::runtime_error(dump("oracle says f is not a bijection"));
    ValueTable inv_tab = invert_table(tab);
    auto mismatch = first_mismatch(map, as_map(inv_tab), ctx);
    if (mismatch) {
        throw std::runtime_error(dump("mismatch with brute-force inverse at index " +
                                      std::to_string(*mismatch)));
    }
    return AmlInverse{std::move(map), std::move(beta), uv};
}

}  // namespace ppinv
