#pragma once

#include "lamdyn/rational.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace lamdyn {

// Raised when two digit-stream angles agree on every requested digit, or a
// predicate cannot be decided from the digits seen within the budget.
class UndecidedAtPrecision : public std::runtime_error {
public:
    explicit UndecidedAtPrecision(const std::string& what)
        : std::runtime_error("UNDECIDED-AT-PRECISION: " + what) {}
};

// Deterministic digit generator, digits in [0, base).
class DigitProgram {
public:
    virtual ~DigitProgram() = default;
    virtual int base() const = 0;
    virtual int digit(std::int64_t n) const = 0;
    // Text form of this program with `shift` leading digits dropped.
    virtual std::string spec_shifted(std::int64_t shift) const = 0;
};

// Sturmian word with rational parameters: digit n = 1 iff frac(rho + n*alpha)
// lies in [1-alpha, 1).  Base 2.  A shift by k folds into rho + k*alpha.
class SturmianProgram final : public DigitProgram {
public:
    SturmianProgram(Rational alpha, Rational rho);
    int base() const override { return 2; }
    int digit(std::int64_t n) const override;
    std::string spec_shifted(std::int64_t shift) const override;
    Rational alpha() const { return alpha_; }
    Rational rho() const { return rho_; }

private:
    Rational alpha_, rho_;
};

// Fixed point of a substitution on digits, read as a digit stream.
class SubstProgram final : public DigitProgram {
public:
    SubstProgram(int base, std::vector<int> axiom,
                 std::vector<std::vector<int>> rules);
    int base() const override { return base_; }
    int digit(std::int64_t n) const override;
    std::string spec_shifted(std::int64_t shift) const override;

private:
    void expand_to(std::size_t len) const;
    int base_;
    std::vector<int> axiom_;
    std::vector<std::vector<int>> rules_;  // rules_[d] = image word of digit d
    mutable std::vector<int> buf_;
};

// A point of the circle R/Z.  One of:
//   * exact rational in [0, 1)
//   * eventually periodic digit expansion in base d (kept verbatim so the
//     printed form round-trips; interconvertible with the rational value)
//   * a digit-generator stream (comparisons against these are budgeted and may
//     come back UNDECIDED-AT-PRECISION)
class Angle {
public:
    enum class Form { rational, digits, stream };

    Angle() : form_(Form::rational), value_(0) {}
    static Angle from_rational(const Rational& r);
    static Angle from_digits(int base, std::vector<int> pre, std::vector<int> per);
    static Angle from_program(std::shared_ptr<const DigitProgram> prog,
                              std::int64_t shift = 0);

    Form form() const { return form_; }
    bool exact() const { return form_ != Form::stream; }
    int base() const { return base_; }  // 0 for plain rationals

    // Exact value; throws for stream form.
    const Rational& value() const;

    // Digit n (0-based, most significant first) of the base-b expansion.
    // For the rational form a base must have been implied by context; pass it.
    int digit(std::int64_t n, int base_hint = 0) const;

    // Truncation sum_{j<k} digit_j * b^-(j+1), exact.  For exact angles just
    // the value.  k is capped so b^k fits in 62 bits.
    Rational window(int k, int base_hint = 0) const;

    std::string str() const;

    // Multiplication by d mod 1; left shift on digit forms (base must equal d).
    Angle sigma(int d) const;

private:
    Form form_;
    Rational value_;           // rational + digits forms
    int base_ = 0;             // digits + stream forms
    std::vector<int> pre_, per_;
    std::shared_ptr<const DigitProgram> prog_;
    std::int64_t shift_ = 0;
};

// Three-way compare as points of [0,1).  Exact when both sides are exact;
// otherwise digit-by-digit using `precision` digits (throws UndecidedAtPrecision
// when the digits seen cannot separate the two points).
std::strong_ordering compare_angles(const Angle& a, const Angle& b, int precision);

// Exact compare; both angles must be exact.
std::strong_ordering compare_exact(const Angle& a, const Angle& b);

inline bool angle_eq(const Angle& a, const Angle& b, int precision) {
    return compare_angles(a, b, precision) == std::strong_ordering::equal;
}

// Circular distance min(|a-b|, 1-|a-b|) of the precision-window values.
Rational angle_distance(const Angle& a, const Angle& b, int precision);

// Eventually periodic expansion of r in base d (preperiod, period digit lists).
std::pair<std::vector<int>, std::vector<int>> rational_to_digits(const Rational& r, int d);

// Value of an eventually periodic expansion.
Rational digits_to_rational(int base, const std::vector<int>& pre,
                            const std::vector<int>& per);

// Angle text syntax:  "p/q" | "base=d;pre=...;per=..." |
// "sturmian(alpha=p/q,rho=p/q)" | "subst(base=d;axiom=...;rules=0:...,1:...[;shift=k])"
Angle parse_angle(const std::string& text);

}  // namespace lamdyn
