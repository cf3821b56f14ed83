#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppinv {

// Arbitrary-precision signed integer, sign-magnitude over base-2^32 limbs.
// Covers what exponent arithmetic needs here: ring operations, ordering,
// decimal round-trip, and reduction modulo a word-sized modulus.
class Bigint {
public:
    Bigint() = default;

    template <std::integral T>
    Bigint(T v) {
        if constexpr (std::signed_integral<T>) {
            if (v < 0) {
                // -(v+1)+1 avoids overflow at the minimum value
                set_u64(static_cast<std::uint64_t>(-(v + 1)) + 1u);
                neg_ = !limbs_.empty();
                return;
            }
        }
        set_u64(static_cast<std::uint64_t>(v));
    }

    static Bigint from_string(std::string_view s) {
        Bigint r;
        bool neg = false;
        std::size_t i = 0;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
            neg = (s[i] == '-');
            ++i;
        }
        if (i == s.size()) throw std::invalid_argument("Bigint: empty numeral");
        for (; i < s.size(); ++i) {
            char ch = s[i];
            if (ch < '0' || ch > '9') throw std::invalid_argument("Bigint: bad digit in numeral");
            r.mul_small(10);
            r.add_small(static_cast<std::uint32_t>(ch - '0'));
        }
        r.neg_ = neg && !r.limbs_.empty();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }

    friend Bigint operator+(const Bigint& a, const Bigint& b) {
        Bigint r;
        if (a.neg_ == b.neg_) {
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_ && !r.limbs_.empty();
        } else {
            int c = cmp_mag(a.limbs_, b.limbs_);
            if (c == 0) return Bigint{};
            if (c > 0) {
                r.limbs_ = sub_mag(a.limbs_, b.limbs_);
                r.neg_ = a.neg_;
            } else {
                r.limbs_ = sub_mag(b.limbs_, a.limbs_);
                r.neg_ = b.neg_;
            }
        }
        return r;
    }

    friend Bigint operator-(const Bigint& a, const Bigint& b) { return a + (-b); }

    Bigint operator-() const {
        Bigint r = *this;
        r.neg_ = !r.limbs_.empty() && !r.neg_;
        return r;
    }

    friend Bigint operator*(const Bigint& a, const Bigint& b) {
        if (a.is_zero() || b.is_zero()) return Bigint{};
        Bigint r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
                unsigned __int128 cur = static_cast<unsigned __int128>(a.limbs_[i]) * b.limbs_[j] +
                                        r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = static_cast<std::uint64_t>(cur >> 32);
            }
            std::size_t k = i + b.limbs_.size();
            while (carry) {
                std::uint64_t cur = r.limbs_[k] + (carry & 0xffffffffu);
                r.limbs_[k] = static_cast<std::uint32_t>(cur);
                carry = (carry >> 32) + (cur >> 32);
                ++k;
            }
        }
        r.trim();
        r.neg_ = (a.neg_ != b.neg_) && !r.limbs_.empty();
        return r;
    }

    std::strong_ordering operator<=>(const Bigint& o) const {
        if (neg_ != o.neg_) return neg_ ? std::strong_ordering::less : std::strong_ordering::greater;
        int c = cmp_mag(limbs_, o.limbs_);
        if (neg_) c = -c;
        return c < 0   ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
    }
    bool operator==(const Bigint& o) const { return neg_ == o.neg_ && limbs_ == o.limbs_; }

    // value mod m in [0, m): mathematical remainder, negative values fold up
    std::uint64_t mod_u64(std::uint64_t m) const {
        if (m == 0) throw std::invalid_argument("Bigint: modulus 0");
        unsigned __int128 r = 0;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            r = ((r << 32) | limbs_[i]) % m;
        }
        std::uint64_t v = static_cast<std::uint64_t>(r);
        if (neg_ && v != 0) v = m - v;
        return v;
    }

    bool fits_u64() const { return !neg_ && limbs_.size() <= 2; }

    std::uint64_t to_u64() const {
        if (!fits_u64()) throw std::domain_error("Bigint: value out of u64 range");
        std::uint64_t v = 0;
        if (limbs_.size() > 0) v = limbs_[0];
        if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
        return v;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<std::uint32_t> chunks;  // base 10^9, little-endian
        std::vector<std::uint32_t> mag = limbs_;
        while (!mag.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = mag.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | mag[i];
                mag[i] = static_cast<std::uint32_t>(cur / 1000000000u);
                rem = cur % 1000000000u;
            }
            while (!mag.empty() && mag.back() == 0) mag.pop_back();
            chunks.push_back(static_cast<std::uint32_t>(rem));
        }
        std::string out = neg_ ? "-" : "";
        out += std::to_string(chunks.back());
        for (std::size_t i = chunks.size() - 1; i-- > 0;) {
            std::string part = std::to_string(chunks[i]);
            out += std::string(9 - part.size(), '0') + part;
        }
        return out;
    }

private:
    std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zero limb; zero == empty
    bool neg_ = false;

    void set_u64(std::uint64_t v) {
        limbs_.clear();
        neg_ = false;
        if (v) limbs_.push_back(static_cast<std::uint32_t>(v));
        if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }

    void mul_small(std::uint32_t f) {
        std::uint64_t carry = 0;
        for (auto& limb : limbs_) {
            std::uint64_t cur = static_cast<std::uint64_t>(limb) * f + carry;
            limb = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        trim();
    }

    void add_small(std::uint32_t v) {
        std::uint64_t carry = v;
        for (std::size_t i = 0; carry && i < limbs_.size(); ++i) {
            std::uint64_t cur = limbs_[i] + carry;
            limbs_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        }
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        const auto& lo = a.size() >= b.size() ? b : a;
        const auto& hi = a.size() >= b.size() ? a : b;
        std::vector<std::uint32_t> r = hi;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(r[i]) + lo[i] + carry;
            r[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        for (std::size_t i = lo.size(); carry && i < r.size(); ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(r[i]) + carry;
            r[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r = a;
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            borrow = cur < 0;
            if (cur < 0) cur += (std::int64_t{1} << 32);
            r[i] = static_cast<std::uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }
};

}  // namespace ppinv
