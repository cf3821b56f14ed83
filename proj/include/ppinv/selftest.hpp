#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "ppinv/certificate.hpp"

namespace ppinv {

namespace selftest_detail {

struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

inline std::vector<LinearizedPoly> non_permutation_linearized(const FieldCtx& ctx) {
    std::vector<LinearizedPoly> out;
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < ctx.n(); ++i) total *= ctx.size();
    for (std::uint64_t v = 0; v < total; ++v) {
        std::uint64_t rest = v;
        std::vector<FieldElement> coeffs;
        for (std::uint32_t i = 0; i < ctx.n(); ++i) {
            coeffs.push_back(ctx.element(rest % ctx.size()));
            rest /= ctx.size();
        }
        LinearizedPoly L = linearized(ctx, std::move(coeffs));
        if (ctx.is_zero(det(dickson(L)))) out.push_back(L);
    }
    return out;
}

}  // namespace selftest_detail

// Deterministic invariant sweep over every module; emits one JSON line per
// check plus representative certificates (wall time pinned to zero so two
// runs are byte-identical). Returns 0 on success, 2 on any failure.
inline int run_selftest(std::ostream& out) {
    using selftest_detail::SplitMix64;
    int failures = 0;
    auto check = [&](const std::string& name, bool pass) {
        json j;
        j["check"] = name;
        j["pass"] = pass;
        out << j.dump() << "\n";
        if (!pass) ++failures;
    };
    auto emit_cert = [&](const CertificateResult& r) {
        json j;
        j["certificate"] = r.cert;
        out << j.dump() << "\n";
        if (!r.consistent) ++failures;
    };

    FieldCtx f9 = FieldCtx::make(3, 1, 2);
    FieldCtx f27 = FieldCtx::make(3, 1, 3);

    // field core
    check("gf.modulus_f9", f9.modulus() == std::vector<std::uint32_t>{1, 0, 1});
    check("gf.modulus_f27", f27.modulus() == std::vector<std::uint32_t>{1, 2, 0, 1});
    check("gf.deterministic_rebuild", FieldCtx::make(3, 1, 3) == f27 &&
                                          FieldCtx::make(3, 1, 3).generator() == f27.generator());
    {
        bool ok = true;
        for (std::uint64_t i = 0; i < f9.size() && ok; ++i) {
            for (std::uint64_t j = 0; j < f9.size() && ok; ++j) {
                FieldElement x = f9.element(i), y = f9.element(j);
                ok = f9.frobenius_q(f9.add(x, y), 1) ==
                         f9.add(f9.frobenius_q(x, 1), f9.frobenius_q(y, 1)) &&
                     f9.frobenius_q(f9.mul(x, y), 1) ==
                         f9.mul(f9.frobenius_q(x, 1), f9.frobenius_q(y, 1));
            }
        }
        check("gf.frobenius_automorphism_f9", ok);
        ok = true;
        for (std::uint64_t i = 1; i < f27.size() && ok; ++i) {
            ok = f27.pow_big(f27.element(i), f27.order_minus_one()) == f27.one();
        }
        check("gf.lagrange_f27", ok);
        ok = true;
        for (std::uint64_t i = 0; i < f27.size() && ok; ++i) {
            FieldElement nx = f27.norm_to_subfield(f27.element(i));
            ok = f27.frobenius_q(nx, 1) == nx;
        }
        check("gf.norm_frobenius_fixed_f27", ok);
    }

    // poly + oracle
    {
        SparsePoly two_x3 = SparsePoly::monomial(f9, 3, f9.from_int(2));
        ValueTable fwd = permutation_check(two_x3);
        ValueTable inv = brute_inverse(two_x3);
        bool ok = fwd.bijective;
        for (std::uint64_t i = 0; i < 9 && ok; ++i) ok = inv.image[fwd.image[i]] == i;
        check("poly.brute_inverse_composes_to_identity", ok);
        ValueTable cube_inv = brute_inverse(SparsePoly::monomial(f27, 3, f27.one()));
        ValueTable ninth = permutation_check(SparsePoly::monomial(f27, 9, f27.one()));
        check("poly.frobenius_inverse_table", cube_inv.image == ninth.image);
        SplitMix64 rng{101};
        ok = true;
        for (int trial = 0; trial < 32 && ok; ++trial) {
            SparsePoly p(f9), r(f9);
            for (int t = 0; t < 3; ++t) {
                p.add_term(Bigint(rng.next() % 16), f9.element(rng.next() % 9));
                r.add_term(Bigint(rng.next() % 16), f9.element(rng.next() % 9));
            }
            FieldElement x = f9.element(rng.next() % 9);
            ok = (p + r).eval(x) == f9.add(p.eval(x), r.eval(x));
        }
        check("poly.eval_linear_in_coefficients", ok);
    }

    // linearized: Dickson nonsingularity == bijectivity, cofactor inverse
    {
        bool ok = true;
        for (std::uint64_t i = 0; i < 9 && ok; ++i) {
            for (std::uint64_t j = 0; j < 9 && ok; ++j) {
                LinearizedPoly L = linearized(f9, {f9.element(i), f9.element(j)});
                DetRank dr = det_rank(dickson(L));
                ok = (!f9.is_zero(dr.det)) == permutation_check(to_sparse(L)).bijective;
                if (ok) ok = dr.rank + kernel_dimension(L) == 2;
            }
        }
        check("linearized.det_iff_bijective_f9", ok);
        SplitMix64 rng{202};
        ok = true;
        int perms = 0, sings = 0;
        while ((perms < 32 || sings < 32) && ok) {
            LinearizedPoly L = linearized(
                f27, {f27.element(rng.next() % 27), f27.element(rng.next() % 27),
                      f27.element(rng.next() % 27)});
            if (f27.is_zero(det(dickson(L)))) {
                ++sings;
                try {
                    linearized_inverse(L);
                    ok = false;
                } catch (const std::domain_error&) {
                }
            } else {
                ++perms;
                LinearizedPoly Linv = linearized_inverse(L);
                ok = verify_identity(compose(as_map(L), as_map(Linv)), identity_map(f27), f27);
            }
        }
        check("linearized.cofactor_inverse_f27", ok);
    }

    // quad family: criterion == oracle across every admissible tuple at q=3
    {
        bool ok = true;
        bool survivors_constant = true;
        int instances = 0;
        for (std::uint64_t k = 2; k <= 8 && ok; ++k) {
            bool case_a_ok = k % 2 == 0;
            for (std::uint64_t ia = 0; ia < 9 && ok; ++ia) {
                FieldElement a = f9.element(ia);
                if (case_a_ok) {
                    for (std::uint64_t ib = 0; ib < 9 && ok; ++ib) {
                        FieldElement b = f9.element(ib);
                        FieldElement apb = f9.add(a, b);
                        if (f9.is_zero(apb) || !f9.in_subfield_q(apb)) continue;
                        QuadFamilyParams p = make_quad_params(f9, a, b, k, QuadCase::A);
                        bool predicted = criterion(p).is_permutation;
                        ok = predicted == permutation_check(build_f(p)).bijective;
                        if (ok && predicted) {
                            SignResolvedInverse inv = inverse_case_a(p);
                            survivors_constant =
                                survivors_constant && inv.sign_variant == "x_minus_T";
                            ++instances;
                        }
                    }
                } else {
                    FieldElement b = f9.frobenius_q(a, 1);
                    if (f9.is_zero(f9.add(a, b))) continue;
                    QuadFamilyParams p = make_quad_params(f9, a, b, k, QuadCase::B);
                    bool predicted = criterion(p).is_permutation;
                    ok = predicted == permutation_check(build_f(p)).bijective;
                    if (ok && predicted) {
                        SignResolvedInverse inv = inverse_case_b(p);
                        survivors_constant = survivors_constant && inv.sign_variant == "x_minus_T";
                        ++instances;
                    }
                }
            }
        }
        check("quad.criterion_matches_oracle_q3", ok);
        check("quad.sign_survivor_constant", survivors_constant && instances > 0);

        SparsePoly sq = xq_minus_x(f9).pow(2);
        bool piecewise = true;
        for (std::uint64_t i = 0; i < 9 && piecewise; ++i) {
            FieldElement x = f9.element(i);
            FieldElement v = sq.eval(x);
            piecewise = f9.in_subfield_q(x) ? f9.is_zero(v) : v == f9.from_int(-1);
        }
        check("quad.xqx_power_piecewise", piecewise);

        emit_cert(certify_quad(make_quad_params(f9, f9.zero(), f9.one(), 2), true, true));
        emit_cert(certify_quad(make_quad_params(f9, f9.one(), f9.one(), 3), true, true));
    }

    // cpp family at q=3
    {
        CppParams P = make_cpp_params(f27);
        bool ok = true;
        try {
            inverse_f(P);
            inverse_f_plus_x(P);
        } catch (const std::exception&) {
            ok = false;
        }
        check("cpp.inverses_validate_q3", ok);
        SparsePoly h = h_factor(P);
        SparsePoly f = build_f(P);
        EvalMap composed = [&](const FieldElement& x) { return h.eval(f27.pow_u64(x, P.e1)); };
        check("cpp.h_factorization", verify_identity(composed, as_map(f), f27));
        LinearizedPoly g = linearized(f27, {f27.one(), f27.one(), f27.zero()});
        check("cpp.inner_equals_linearized_inverse",
              inner_g_inverse(P) == to_sparse(linearized_inverse(g)));
        bool expok = true;
        for (std::uint64_t q = 3; q <= 101 && expok; ++q) {
            std::uint32_t pp = 0, ee = 0;
            try {
                decompose_prime_power(q, pp, ee);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (pp == 2) continue;
            Bigint w = Bigint(q) * Bigint(q) * Bigint(q) - Bigint(q) * Bigint(q) + Bigint(q);
            expok = (w * (Bigint(q) * Bigint(q) + Bigint(1))).mod_u64(2 * (q * q * q - 1)) == 2;
        }
        check("cpp.exponent_identity_odd_q_le_101", expok);
        emit_cert(certify_cpp(P, true, true));
    }

    // aml family: full sweep at q=3, n=2
    {
        std::vector<LinearizedPoly> ls = selftest_detail::non_permutation_linearized(f9);
        bool ok = ls.size() == 33;
        bool identities = true;
        for (const FieldElement& b : enumerate_norm_one_b(f9)) {
            for (std::uint64_t m = 1; m <= 6 && ok; ++m) {
                for (const LinearizedPoly& L : ls) {
                    AmlParams p = make_aml_params(f9, b, m, L);
                    AmlCriterion c = criterion(p);
                    SparsePoly f = build_f(p);
                    bool actual = permutation_check(f).bijective;
                    ok = c.is_permutation == actual;
                    if (!ok) break;
                    EvalMap lll = [&](const FieldElement& x) {
                        return f9.sub(f.eval(x), f9.pow_u64(eval(p.A, x), m));
                    };
                    identities = identities && verify_identity(lll, as_map(L), f9);
                    if (c.rank_ok) {
                        LinearizedPoly psi1 = linearized(f9, c.alpha);
                        EvalMap amx_l = [&](const FieldElement& x) { return eval(psi1, f.eval(x)); };
                        EvalMap amx_r = [&](const FieldElement& x) {
                            return f9.mul(c.s, f9.pow_u64(eval(p.A, x), m));
                        };
                        identities = identities && verify_identity(amx_l, amx_r, f9);
                    }
                    if (c.is_permutation) {
                        try {
                            inverse(p, c);
                        } catch (const std::exception&) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
        }
        check("aml.criterion_matches_oracle_q3_n2", ok);
        check("aml.proof_identities_q3_n2", identities);
        LinearizedPoly L = linearized(f9, {f9.one(), f9.one()});
        emit_cert(certify_aml(make_aml_params(f9, f9.from_int(-1), 1, L), true, true));
    }

    json done;
    done["failures"] = failures;
    done["selftest"] = failures == 0 ? "ok" : "failed";
    out << done.dump() << "\n";
    return failures == 0 ? 0 : 2;
}

}  // namespace ppinv
