#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lamdyn {

// Reduced fraction on int64 with 128-bit intermediates.  Values handled by the
// circle/lamination layers are structurally small (denominators bounded by
// base * d^depth), so any overflow here indicates a usage bug and throws.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    static Rational from_i128(__int128 n, __int128 d);

    Rational operator+(const Rational& o) const {
        return from_i128((__int128)num_ * o.den_ + (__int128)o.num_ * den_,
                         (__int128)den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return from_i128((__int128)num_ * o.den_ - (__int128)o.num_ * den_,
                         (__int128)den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return from_i128((__int128)num_ * o.num_, (__int128)den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_i128((__int128)num_ * o.den_, (__int128)den_ * o.num_);
    }
    Rational operator-() const { Rational r; r.num_ = -num_; r.den_ = den_; return r; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    std::strong_ordering operator<=>(const Rational& o) const {
        __int128 l = (__int128)num_ * o.den_, r = (__int128)o.num_ * den_;
        if (l < r) return std::strong_ordering::less;
        if (l > r) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    bool is_integer() const { return den_ == 1; }
    Rational abs() const { return num_ < 0 ? -*this : *this; }

    // floor(*this), as an integer
    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    // fractional part in [0, 1)
    Rational mod1() const {
        Rational r;
        std::int64_t m = num_ % den_;
        if (m < 0) m += den_;
        r.num_ = m;
        r.den_ = den_;
        std::int64_t g = std::gcd(r.num_, r.den_);
        if (g > 1) { r.num_ /= g; r.den_ /= g; }
        return r;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    double to_double() const { return double(num_) / double(den_); }

private:
    void reduce() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    std::int64_t num_;
    std::int64_t den_;  // > 0
};

inline Rational Rational::from_i128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
        throw std::overflow_error("Rational: value exceeds 64-bit range");
    Rational r;
    r.num_ = (std::int64_t)n;
    r.den_ = (std::int64_t)d;
    return r;
}

// Parses "p/q" or "p" (reduced on the way in).  Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

}  // namespace lamdyn
