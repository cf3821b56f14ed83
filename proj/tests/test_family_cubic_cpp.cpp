#include <doctest.h>

#include <cstdint>

#include "ppinv/family_cubic_cpp.hpp"

using namespace ppinv;

namespace {

struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

}  // namespace

TEST_CASE("exponent layout") {
    FieldCtx f27 = FieldCtx::make(3, 1, 3);
    CppParams p3 = make_cpp_params(f27);
    CHECK(p3.e1 == 5);
    CHECK(p3.e2 == 15);
    CHECK(p3.w == 21);
    SparsePoly f = build_f(p3);
    SparsePoly expected = SparsePoly::monomial(f27, 5, f27.one());
    expected.add_term(15, f27.one());
    expected.add_term(1, f27.from_int(-1));
    CHECK(f == expected);
    CHECK(f.eval(f27.one()) == f27.one());  // -1 + 1 + 1

    FieldCtx f125 = FieldCtx::make(5, 1, 3);
    CppParams p5 = make_cpp_params(f125);
    CHECK(p5.e1 == 13);
    CHECK(p5.e2 == 65);
    CHECK(build_f(p5).eval(f125.one()) == f125.one());

    CHECK_THROWS_AS(make_cpp_params(FieldCtx::make(2, 1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(make_cpp_params(FieldCtx::make(3, 1, 2)), std::invalid_argument);
}

TEST_CASE("w * e1 = 1 mod q^3-1 for every odd prime power q up to 101") {
    for (std::uint64_t q = 3; q <= 101; ++q) {
        std::uint32_t p = 0, e = 0;
        try {
            decompose_prime_power(q, p, e);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (p == 2) continue;
        Bigint w = Bigint(q) * Bigint(q) * Bigint(q) - Bigint(q) * Bigint(q) + Bigint(q);
        Bigint e1_twice = Bigint(q) * Bigint(q) + Bigint(1);
        CHECK(e1_twice.mod_u64(2) == 0);  // (q^2+1)/2 integral
        std::uint64_t ord = q * q * q - 1;
        // w * (q^2+1) = 2 mod 2(q^3-1) <=> w * e1 = 1 mod q^3-1
        CHECK((w * e1_twice).mod_u64(2 * ord) == 2);
    }
}

TEST_CASE("unique root of a^q x^q + a^(q^2) x - 2") {
    FieldCtx f27 = FieldCtx::make(3, 1, 3);
    CHECK(affine_twist_root(f27, f27.one()) == f27.one());  // 1 + 1 - 2 = 0

    SplitMix64 rng{2024};
    for (int trial = 0; trial < 10; ++trial) {
        FieldElement a = f27.element(rng.next() % 26 + 1);
        FieldElement r = affine_twist_root(f27, a);
        FieldElement lhs = f27.add(f27.mul(f27.frobenius_q(a, 1), f27.frobenius_q(r, 1)),
                                   f27.mul(f27.frobenius_q(a, 2), r));
        CHECK(lhs == f27.from_int(2));
        // exhaustive uniqueness scan
        int roots = 0;
        for (std::uint64_t i = 0; i < 27; ++i) {
            FieldElement x = f27.element(i);
            FieldElement v = f27.add(f27.mul(f27.frobenius_q(a, 1), f27.frobenius_q(x, 1)),
                                     f27.mul(f27.frobenius_q(a, 2), x));
            if (v == f27.from_int(2)) ++roots;
        }
        CHECK(roots == 1);
    }
    CHECK_THROWS_AS(affine_twist_root(f27, f27.zero()), std::invalid_argument);
}

TEST_CASE("f and f+x are both permutations (q = 3, 5)") {
    for (std::uint32_t q : {3u, 5u}) {
        FieldCtx ctx = FieldCtx::make(q, 1, 3);
        CppParams p = make_cpp_params(ctx);
        CHECK(permutation_check(build_f(p)).bijective);
        CHECK(permutation_check(build_f_plus_x(p)).bijective);
    }
}

TEST_CASE("inner map equals the linearized inverse of x + x^q") {
    FieldCtx f27 = FieldCtx::make(3, 1, 3);
    CppParams p = make_cpp_params(f27);
    LinearizedPoly g = linearized(f27, {f27.one(), f27.one(), f27.zero()});
    LinearizedPoly ginv = linearized_inverse(g);
    CHECK(inner_g_inverse(p) == to_sparse(ginv));
}

TEST_CASE("closed-form inverses validate at q = 3") {
    FieldCtx f27 = FieldCtx::make(3, 1, 3);
    CppParams p = make_cpp_params(f27);

    EvalMap inv_fx = inverse_f_plus_x(p);  // self-validates exhaustively
    // fixes 0; sends (f+x)(1) = 2 back to 1
    CHECK(inv_fx(f27.zero()) == f27.zero());
    SparsePoly fpx = build_f_plus_x(p);
    CHECK(fpx.eval(f27.one()) == f27.from_int(2));
    CHECK(inv_fx(f27.from_int(2)) == f27.one());

    EvalMap inv_f = inverse_f(p);
    CHECK(inv_f(f27.zero()) == f27.zero());
    SparsePoly f = build_f(p);
    CHECK(verify_identity(compose(inv_f, as_map(f)), identity_map(f27), f27));
    CHECK(verify_identity(compose(as_map(f), inv_f), identity_map(f27), f27));
}

TEST_CASE("q = 9 prime-power instance over F_729") {
    FieldCtx f729 = FieldCtx::make(3, 2, 3);
    CppParams p = make_cpp_params(f729);
    CHECK(p.e1 == 41);
    CHECK(p.e2 == 369);
    CHECK(permutation_check(build_f(p)).bijective);
    CHECK(permutation_check(build_f_plus_x(p)).bijective);
    CHECK_NOTHROW(inverse_f(p));         // validates exhaustively inside
    CHECK_NOTHROW(inverse_f_plus_x(p));
}

TEST_CASE("h factorization: f = h o x^e1 pointwise") {
    FieldCtx f27 = FieldCtx::make(3, 1, 3);
    CppParams p = make_cpp_params(f27);
    SparsePoly h = h_factor(p);
    CHECK(h.terms().count(Bigint(21)) == 1);  // 1 + q - q^2 = -5 = 21 mod 26
    SparsePoly f = build_f(p);
    EvalMap composed = [&](const FieldElement& x) { return h.eval(f27.pow_u64(x, p.e1)); };
    CHECK(verify_identity(composed, as_map(f), f27));
}
