#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ppinv/bigint.hpp"

namespace ppinv {

// Default ceiling on q^n for exhaustive enumeration; the CLI lets
// PPINV_MAX_FIELD raise it.
inline constexpr std::uint64_t kDefaultFieldCap = std::uint64_t{1} << 22;

// Element of F_{p^(e*n)}: little-endian coefficient vector over F_p in the
// modulus basis, every coefficient reduced into [0, p).
struct FieldElement {
    std::vector<std::uint32_t> c;
    bool operator==(const FieldElement&) const = default;
};

namespace detail {

using Poly = std::vector<std::uint32_t>;  // little-endian coefficients mod p

inline bool is_prime_u64(std::uint64_t v) {
    if (v < 2) return false;
    if (v % 2 == 0) return v == 2;
    for (std::uint64_t d = 3; d * d <= v; d += 2) {
        if (v % d == 0) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t v) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= v; d += (d == 2 ? 1 : 2)) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

inline std::uint32_t pow_mod_u32(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
    std::uint64_t r = 1 % p, b = base % p;
    while (exp) {
        if (exp & 1) r = r * b % p;
        b = b * b % p;
        exp >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

inline std::uint32_t inv_mod_u32(std::uint32_t a, std::uint32_t p) {
    return pow_mod_u32(a, p - 2, p);  // p prime
}

inline std::size_t poly_degree(const Poly& a) {
    std::size_t i = a.size();
    while (i > 0 && a[i - 1] == 0) --i;
    return i;  // 0 means zero polynomial; otherwise degree+1
}

// a * b reduced by the monic modulus f (degree d), all coefficients mod p.
// Lazy accumulation in u64 is safe: p < 2^22 and degrees stay small.
inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
    const std::size_t d = f.size() - 1;
    std::vector<std::uint64_t> t(2 * d > 0 ? 2 * d - 1 : 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            t[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
        }
    }
    for (std::size_t i = t.size(); i-- > d;) {
        std::uint64_t v = t[i] % p;
        if (!v) continue;
        // x^i == -sum f_j x^(i-d+j) for monic f
        for (std::size_t j = 0; j < d; ++j) {
            t[i - d + j] += v * (p - f[j] % p);
        }
        t[i] = 0;
    }
    Poly r(d);
    for (std::size_t j = 0; j < d; ++j) r[j] = static_cast<std::uint32_t>(t[j] % p);
    return r;
}

inline Poly poly_powmod(Poly base, std::uint64_t exp, const Poly& f, std::uint32_t p) {
    const std::size_t d = f.size() - 1;
    Poly r(d, 0);
    if (d > 0) r[0] = 1 % p;
    while (exp) {
        if (exp & 1) r = poly_mulmod(r, base, f, p);
        base = poly_mulmod(base, base, f, p);
        exp >>= 1;
    }
    return r;
}

inline Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
    std::size_t db = poly_degree(b);
    std::uint32_t lead_inv = inv_mod_u32(b[db - 1], p);
    for (std::size_t da = poly_degree(a); da >= db && da > 0; da = poly_degree(a)) {
        std::uint64_t factor = static_cast<std::uint64_t>(a[da - 1]) * lead_inv % p;
        std::size_t shift = da - db;
        for (std::size_t j = 0; j < db; ++j) {
            std::uint64_t sub = factor * b[j] % p;
            a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + p - sub) % p);
        }
    }
    return a;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
    while (poly_degree(b) != 0) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Rabin irreducibility test for a monic polynomial of degree d over F_p:
// x^(p^d) == x mod f, and gcd(x^(p^(d/r)) - x, f) == 1 for every prime r | d.
inline bool rabin_irreducible(const Poly& f, std::uint32_t p) {
    const std::size_t d = f.size() - 1;
    if (d == 1) return true;
    Poly x(d, 0);
    x[1] = 1;
    std::uint64_t pd = 1;
    for (std::size_t i = 0; i < d; ++i) pd *= p;
    for (std::uint64_t r : distinct_prime_factors(d)) {
        std::uint64_t pe = 1;
        for (std::size_t i = 0; i < d / r; ++i) pe *= p;
        Poly h = poly_powmod(x, pe, f, p);
        // h - x
        Poly diff = h;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<std::uint32_t>((diff[1] + p - 1) % p);
        if (poly_degree(diff) == 0) return false;  // x^(p^(d/r)) == x: proper subfield splits f
        Poly g = poly_gcd(f, diff, p);
        if (poly_degree(g) != 1) return false;
    }
    Poly h = poly_powmod(x, pd, f, p);
    Poly diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = static_cast<std::uint32_t>((diff[1] + p - 1) % p);
    return poly_degree(diff) == 0;
}

}  // namespace detail

// Immutable description of F_{q^n} with q = p^e, realized as the single tower
// F_p[x]/(m(x)) of degree e*n with m the lexicographically smallest monic
// irreducible (little-endian counting order), so equal arguments always
// rebuild the identical context.
class FieldCtx {
public:
    static FieldCtx make(std::uint32_t p, std::uint32_t e, std::uint32_t n,
                         std::uint64_t max_elements = kDefaultFieldCap) {
        if (!detail::is_prime_u64(p)) throw std::invalid_argument("FieldCtx: p must be prime");
        if (e < 1 || n < 1) throw std::invalid_argument("FieldCtx: e and n must be positive");
        FieldCtx ctx;
        ctx.p_ = p;
        ctx.e_ = e;
        ctx.n_ = n;
        ctx.deg_ = e * n;
        if (ctx.deg_ > 63) throw std::invalid_argument("FieldCtx: extension degree too large");
        ctx.size_ = 1;
        for (std::uint32_t i = 0; i < ctx.deg_; ++i) {
            if (ctx.size_ > max_elements / p) {
                throw std::invalid_argument("FieldCtx: field size exceeds enumeration cap");
            }
            ctx.size_ *= p;
        }
        ctx.q_ = 1;
        for (std::uint32_t i = 0; i < e; ++i) ctx.q_ *= p;
        ctx.order_minus_one_ = Bigint(ctx.size_ - 1);
        ctx.modulus_ = find_modulus(p, ctx.deg_, ctx.size_);
        ctx.g_ = primitive_search(ctx);
        return ctx;
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t e() const { return e_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t deg() const { return deg_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t size() const { return size_; }
    const Bigint& order_minus_one() const { return order_minus_one_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    const FieldElement& generator() const { return g_; }

    bool operator==(const FieldCtx& o) const {
        return p_ == o.p_ && e_ == o.e_ && n_ == o.n_ && modulus_ == o.modulus_ && g_ == o.g_;
    }

    FieldElement zero() const { return FieldElement{std::vector<std::uint32_t>(deg_, 0)}; }

    FieldElement one() const { return from_int(1); }

    FieldElement from_int(std::int64_t v) const {
        FieldElement r = zero();
        std::int64_t m = v % static_cast<std::int64_t>(p_);
        if (m < 0) m += p_;
        r.c[0] = static_cast<std::uint32_t>(m);
        return r;
    }

    FieldElement from_coeffs(const std::vector<std::int64_t>& coeffs) const {
        if (coeffs.size() > deg_) {
            throw std::invalid_argument("FieldCtx: coefficient list longer than extension degree");
        }
        FieldElement r = zero();
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            std::int64_t m = coeffs[i] % static_cast<std::int64_t>(p_);
            if (m < 0) m += p_;
            r.c[i] = static_cast<std::uint32_t>(m);
        }
        return r;
    }

    // little-endian counting order: index = sum c_i p^i
    FieldElement element(std::uint64_t index) const {
        FieldElement r = zero();
        for (std::uint32_t i = 0; i < deg_ && index; ++i) {
            r.c[i] = static_cast<std::uint32_t>(index % p_);
            index /= p_;
        }
        return r;
    }

    std::uint64_t index_of(const FieldElement& x) const {
        std::uint64_t idx = 0;
        for (std::size_t i = x.c.size(); i-- > 0;) idx = idx * p_ + x.c[i];
        return idx;
    }

    bool is_zero(const FieldElement& x) const {
        for (auto v : x.c) {
            if (v) return false;
        }
        return true;
    }

    FieldElement add(const FieldElement& x, const FieldElement& y) const {
        FieldElement r = x;
        for (std::uint32_t i = 0; i < deg_; ++i) {
            r.c[i] += y.c[i];
            if (r.c[i] >= p_) r.c[i] -= p_;
        }
        return r;
    }

    FieldElement sub(const FieldElement& x, const FieldElement& y) const {
        FieldElement r = x;
        for (std::uint32_t i = 0; i < deg_; ++i) {
            r.c[i] = r.c[i] >= y.c[i] ? r.c[i] - y.c[i] : r.c[i] + p_ - y.c[i];
        }
        return r;
    }

    FieldElement neg(const FieldElement& x) const { return sub(zero(), x); }

    FieldElement mul(const FieldElement& x, const FieldElement& y) const {
        return FieldElement{detail::poly_mulmod(x.c, y.c, modulus_, p_)};
    }

    // raw non-negative power; 0^0 == 1 by convention of the internal helper
    FieldElement pow_u64(const FieldElement& x, std::uint64_t exp) const {
        return FieldElement{detail::poly_powmod(x.c, exp, modulus_, p_)};
    }

    FieldElement inv(const FieldElement& x) const {
        if (is_zero(x)) throw std::domain_error("FieldCtx: inverse of zero");
        return pow_u64(x, size_ - 2);
    }

    // x^e with the exponent reduced mod q^n - 1 on nonzero bases; 0^e = 0 for
    // e > 0; zero base with e <= 0 is rejected.
    FieldElement pow_big(const FieldElement& x, const Bigint& exp) const {
        if (is_zero(x)) {
            if (exp.is_negative()) throw std::domain_error("FieldCtx: zero base with negative exponent");
            if (exp.is_zero()) throw std::domain_error("FieldCtx: 0^0 is ill-posed");
            return zero();
        }
        return pow_u64(x, exp.mod_u64(size_ - 1));
    }

    // x^(q^j), j taken mod n
    FieldElement frobenius_q(const FieldElement& x, std::uint64_t j) const {
        j %= n_;
        std::uint64_t exp = 1;
        for (std::uint64_t i = 0; i < j; ++i) exp *= q_;
        return pow_u64(x, exp);
    }

    // x^((q^n-1)/(q-1)); 0 for x = 0; lands in the q-element subfield
    FieldElement norm_to_subfield(const FieldElement& x) const {
        if (is_zero(x)) return zero();
        return pow_u64(x, (size_ - 1) / (q_ - 1));
    }

    bool in_subfield_q(const FieldElement& x) const { return frobenius_q(x, 1) == x; }

    std::vector<FieldElement> subfield_q_elements() const {
        std::vector<FieldElement> out;
        out.reserve(q_);
        for (std::uint64_t i = 0; i < size_; ++i) {
            FieldElement x = element(i);
            if (in_subfield_q(x)) out.push_back(x);
        }
        return out;
    }

    std::string to_string(const FieldElement& x) const {
        std::string out;
        for (std::uint32_t i = 0; i < deg_; ++i) {
            if (i) out += ',';
            out += std::to_string(x.c[i]);
        }
        return out;
    }

    FieldElement parse_element(std::string_view s) const {
        std::vector<std::int64_t> coeffs;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            std::size_t next = s.find(',', pos);
            std::string_view tok = s.substr(pos, next == std::string_view::npos ? next : next - pos);
            if (tok.empty()) throw std::invalid_argument("FieldCtx: empty coefficient");
            coeffs.push_back(std::stoll(std::string(tok)));
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
        return from_coeffs(coeffs);
    }

private:
    std::uint32_t p_ = 0, e_ = 0, n_ = 0, deg_ = 0;
    std::uint64_t q_ = 0, size_ = 0;
    std::vector<std::uint32_t> modulus_;
    Bigint order_minus_one_;
    FieldElement g_;

    static std::vector<std::uint32_t> find_modulus(std::uint32_t p, std::uint32_t deg,
                                                   std::uint64_t size) {
        std::vector<std::uint32_t> f(deg + 1, 0);
        f[deg] = 1;
        for (std::uint64_t v = 0; v < size; ++v) {
            std::uint64_t rest = v;
            for (std::uint32_t i = 0; i < deg; ++i) {
                f[i] = static_cast<std::uint32_t>(rest % p);
                rest /= p;
            }
            if (detail::rabin_irreducible(f, p)) return f;
        }
        throw std::logic_error("FieldCtx: no irreducible modulus found");  // unreachable
    }

    static FieldElement primitive_search(const FieldCtx& ctx) {
        auto factors = detail::distinct_prime_factors(ctx.size_ - 1);
        for (std::uint64_t idx = 1; idx < ctx.size_; ++idx) {
            FieldElement g = ctx.element(idx);
            bool ok = true;
            for (std::uint64_t r : factors) {
                if (ctx.pow_u64(g, (ctx.size_ - 1) / r) == ctx.one()) {
                    ok = false;
                    break;
                }
            }
            if (ok) return g;
        }
        throw std::logic_error("FieldCtx: no primitive element found");  // unreachable
    }
};

// First element in little-endian counting order whose multiplicative order is
// q^n - 1. make() caches exactly this value as generator().
inline FieldElement primitive_element(const FieldCtx& ctx) {
    return ctx.generator();
}

// "p:e:n" or "p^e^n"
inline void parse_field_spec(std::string_view s, std::uint32_t& p, std::uint32_t& e,
                             std::uint32_t& n) {
    char sep = s.find(':') != std::string_view::npos ? ':' : '^';
    std::size_t a = s.find(sep);
    std::size_t b = a == std::string_view::npos ? a : s.find(sep, a + 1);
    if (a == std::string_view::npos || b == std::string_view::npos) {
        throw std::invalid_argument("field spec must be p:e:n or p^e^n");
    }
    p = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(0, a))));
    e = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(a + 1, b - a - 1))));
    n = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(b + 1))));
}

// q = p^e for prime p, unique; rejects non-prime-powers
inline void decompose_prime_power(std::uint64_t qv, std::uint32_t& p, std::uint32_t& e) {
    if (qv < 2) throw std::invalid_argument("q must be a prime power >= 2");
    std::uint64_t base = qv;
    for (std::uint64_t d = 2; d * d <= base; ++d) {
        if (base % d == 0) {
            base = d;
            break;
        }
    }
    std::uint32_t exp = 0;
    std::uint64_t acc = 1;
    while (acc < qv) {
        acc *= base;
        ++exp;
    }
    if (acc != qv) throw std::invalid_argument("q is not a prime power");
    p = static_cast<std::uint32_t>(base);
    e = exp;
}

}  // namespace ppinv
