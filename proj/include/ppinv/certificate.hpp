#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ppinv/family_aml.hpp"
#include "ppinv/family_cubic_cpp.hpp"
#include "ppinv/family_quadratic.hpp"
#include "ppinv/linearized.hpp"
#include "ppinv/poly.hpp"

namespace ppinv {

using json = nlohmann::json;

inline json field_json(const FieldCtx& ctx) {
    json j;
    j["p"] = ctx.p();
    j["e"] = ctx.e();
    j["n"] = ctx.n();
    j["q"] = ctx.q();
    j["order"] = ctx.size();
    j["modulus"] = ctx.modulus();
    j["generator"] = ctx.to_string(ctx.generator());
    return j;
}

// ascending exponents, coefficients as base-p lists
inline json spoly_json(const SparsePoly& p) {
    json arr = json::array();
    for (const auto& [e, c] : p.terms()) {
        arr.push_back(json::array({e.to_u64(), p.ctx().to_string(c)}));
    }
    return arr;
}

inline json linearized_json(const LinearizedPoly& L) {
    json arr = json::array();
    for (const auto& c : L.coeffs) arr.push_back(L.ctx->to_string(c));
    return arr;
}

inline json matrix_json(const Matrix& m) {
    json arr = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) arr.push_back(m.ctx().to_string(m.at(r, c)));
    }
    return arr;
}

// domain index -> element coefficient list
inline json table_json(const ValueTable& t) {
    json j;
    j["bijective"] = t.bijective;
    json vals = json::array();
    for (std::uint64_t idx : t.image) {
        FieldElement v = t.ctx->element(idx);
        vals.push_back(v.c);
    }
    j["values"] = vals;
    return j;
}

// one hex value per line, index order = element enumeration order;
// only defined while indices fit in 16 bits
inline void write_sbox_hex(const ValueTable& t, std::ostream& os) {
    const std::uint64_t size = t.ctx->size();
    if (size > 65536) {
        throw std::invalid_argument("sbox export: field exceeds 16 bits per element");
    }
    int width = 1;
    for (std::uint64_t v = size - 1; v >= 16; v /= 16) ++width;
    char buf[8];
    for (std::uint64_t idx : t.image) {
        std::snprintf(buf, sizeof(buf), "%0*llx", width, static_cast<unsigned long long>(idx));
        os << buf << '\n';
    }
}

struct CertificateResult {
    json cert;
    bool consistent = false;
};

namespace detail {

inline const char* verdict_str(bool is_perm) {
    return is_perm ? "PERMUTATION" : "NOT_A_PERMUTATION";
}

class WallClock {
public:
    explicit WallClock(bool zeroed) : zeroed_(zeroed), start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        if (zeroed_) return 0.0;
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    bool zeroed_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// Certificate contract shared by every family: the criterion verdict and
// the oracle verdict are both present, and "consistent" records their
// agreement. Callers treat disagreement as a hard error, never as output to
// pass along silently.
inline CertificateResult certify_quad(const QuadFamilyParams& P, bool with_inverse,
                                      bool zero_time) {
    const FieldCtx& ctx = *P.ctx;
    detail::WallClock clock(zero_time);
    QuadCriterion crit = criterion(P);
    SparsePoly f = build_f(P);
    ValueTable oracle = permutation_check(f);

    json j;
    j["family"] = "quad";
    j["field"] = field_json(ctx);
    j["params"] = {{"a", ctx.to_string(P.a)},
                   {"b", ctx.to_string(P.b)},
                   {"k", P.k},
                   {"case", P.variant == QuadCase::A ? "A" : "B"}};
    json derived;
    derived["b_minus_aq"] = ctx.to_string(crit.b_minus_aq);
    derived["gcd_k_qm1"] = crit.gcd_k_qm1;
    json criterion_j;
    criterion_j["verdict"] = detail::verdict_str(crit.is_permutation);
    if (P.variant == QuadCase::A) {
        criterion_j["b_neq_aq"] = !ctx.is_zero(crit.b_minus_aq);
    } else {
        criterion_j["gcd_is_one"] = crit.gcd_k_qm1 == 1;
        UvPair uv = solve_uv(P.k, ctx.q());
        derived["u"] = uv.u;
        derived["v"] = uv.v;
    }
    j["criterion"] = criterion_j;
    j["derived"] = derived;
    j["oracle"] = {{"bijective", oracle.bijective},
                   {"verdict", detail::verdict_str(oracle.bijective)}};
    bool consistent = crit.is_permutation == oracle.bijective;
    j["consistent"] = consistent;

    if (with_inverse && consistent && crit.is_permutation) {
        SignResolvedInverse inv = closed_form_inverse(P);
        bool left = verify_identity(compose(as_map(inv.poly), as_map(f)), identity_map(ctx), ctx);
        j["inverse"] = {{"validated", left},
                        {"sign_variant", inv.sign_variant},
                        {"both_variants_match", inv.both_variants_match},
                        {"poly", spoly_json(inv.poly)}};
        consistent = consistent && left;
        j["consistent"] = consistent;
    } else {
        j["inverse"] = nullptr;
    }
    j["wall_time_ms"] = clock.elapsed_ms();
    return CertificateResult{std::move(j), consistent};
}

inline CertificateResult certify_cpp(const CppParams& P, bool with_inverse, bool zero_time) {
    const FieldCtx& ctx = *P.ctx;
    detail::WallClock clock(zero_time);
    SparsePoly f = build_f(P);
    SparsePoly fpx = build_f_plus_x(P);
    ValueTable tf = permutation_check(f);
    ValueTable tfx = permutation_check(fpx);

    json j;
    j["family"] = "cpp";
    j["field"] = field_json(ctx);
    j["params"] = {{"q", P.q}, {"e1", P.e1}, {"e2", P.e2}, {"w", P.w}};
    // the family is a CPP for every odd q; params cannot exist otherwise
    j["criterion"] = {{"verdict", "PERMUTATION"}, {"q_odd", true}, {"cpp_claimed", true}};
    j["oracle"] = {{"bijective", tf.bijective && tfx.bijective},
                   {"f_bijective", tf.bijective},
                   {"f_plus_x_bijective", tfx.bijective},
                   {"verdict", detail::verdict_str(tf.bijective && tfx.bijective)}};
    bool consistent = tf.bijective && tfx.bijective;
    j["consistent"] = consistent;

    if (with_inverse && consistent) {
        // these validate exhaustively inside; reaching here means they passed
        inverse_f(P);
        inverse_f_plus_x(P);
        std::string wq = std::to_string(P.w);
        std::string q1 = std::to_string(P.q);
        std::string q2 = std::to_string(P.q * P.q);
        j["inverse"] = {
            {"f_inverse",
             {{"validated", true},
              {"form", "(x^" + std::to_string(P.q * P.q + P.q + 1) + " * (x^" +
                           std::to_string(P.q + 1) + " - x^" + std::to_string(2 * P.q) + " + x^" +
                           std::to_string(P.q * P.q + P.q) + ")^" +
                           std::to_string(P.q * P.q * P.q - 2) + ")^" + wq}}},
            {"f_plus_x_inverse",
             {{"validated", true},
              {"form", "((x - x^" + q1 + " + x^" + q2 + ")/2)^" + wq},
              {"inner", spoly_json(inner_g_inverse(P))}}}};
    } else {
        j["inverse"] = nullptr;
    }
    j["wall_time_ms"] = clock.elapsed_ms();
    return CertificateResult{std::move(j), consistent};
}

inline CertificateResult certify_aml(const AmlParams& P, bool with_inverse, bool zero_time) {
    const FieldCtx& ctx = *P.ctx;
    detail::WallClock clock(zero_time);
    AmlCriterion crit = criterion(P);
    SparsePoly f = build_f(P);
    ValueTable oracle = permutation_check(f);

    json j;
    j["family"] = "aml";
    j["field"] = field_json(ctx);
    j["params"] = {{"b", ctx.to_string(P.b)}, {"m", P.m}, {"L", linearized_json(P.L)}};
    json criterion_j;
    criterion_j["verdict"] = detail::verdict_str(crit.is_permutation);
    criterion_j["gcd_is_one"] = crit.gcd_ok;
    criterion_j["rank_is_n_minus_1"] = crit.rank_ok;
    criterion_j["s_nonzero"] = crit.have_alpha ? json(crit.s_nonzero) : json(nullptr);
    criterion_j["det_B_nonzero"] = crit.det_B_nonzero;
    j["criterion"] = criterion_j;
    json derived;
    derived["A"] = linearized_json(P.A);
    derived["rank_D"] = crit.rank;
    derived["det_B"] = ctx.to_string(crit.det_B);
    derived["B"] = matrix_json(build_B(P.A, P.L));
    derived["D"] = matrix_json(dickson(P.L));
    if (crit.have_alpha) {
        json alpha = json::array();
        for (const auto& a : crit.alpha) alpha.push_back(ctx.to_string(a));
        derived["alpha"] = alpha;
        derived["s"] = ctx.to_string(crit.s);
    } else {
        derived["alpha"] = nullptr;
        derived["s"] = nullptr;
    }
    j["oracle"] = {{"bijective", oracle.bijective},
                   {"verdict", detail::verdict_str(oracle.bijective)}};
    bool consistent = crit.is_permutation == oracle.bijective;
    j["consistent"] = consistent;

    if (with_inverse && consistent && crit.is_permutation) {
        AmlInverse inv = inverse(P, crit);  // validates pointwise, throws on mismatch
        json beta = json::array();
        for (const auto& x : inv.beta) beta.push_back(ctx.to_string(x));
        derived["beta"] = beta;
        derived["u"] = inv.uv.u;
        derived["v"] = inv.uv.v;
        j["inverse"] = {{"validated", true},
                        {"u", inv.uv.u},
                        {"v", inv.uv.v},
                        {"form", "beta_1 b^{-qv} s^{-u} psi1(x)^u + (beta_2 x + ... + beta_n "
                                 "x^{q^{n-2}}) o (x - b^{-qvm} s^{-um} psi1(x)^{um})"}};
    } else {
        j["inverse"] = nullptr;
    }
    j["derived"] = derived;
    j["wall_time_ms"] = clock.elapsed_ms();
    return CertificateResult{std::move(j), consistent};
}

}  // namespace ppinv
