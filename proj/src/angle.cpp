#include "lamdyn/angle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace lamdyn {

namespace {

std::int64_t checked_pow(std::int64_t b, int k) {
    __int128 v = 1;
    for (int i = 0; i < k; ++i) {
        v *= b;
        if (v > (__int128)1 << 62)
            throw std::overflow_error("digit window exceeds 62-bit denominator");
    }
    return (std::int64_t)v;
}

std::string digits_str(const std::vector<int>& ds) {
    std::string s;
    s.reserve(ds.size());
    for (int d : ds) s.push_back(char('0' + d));
    return s;
}

std::vector<int> parse_digit_word(const std::string& s, int base) {
    std::vector<int> out;
    for (char c : s) {
        if (!std::isdigit((unsigned char)c))
            throw std::invalid_argument("bad digit character '" + std::string(1, c) + "'");
        int d = c - '0';
        if (d >= base)
            throw std::invalid_argument("digit " + std::to_string(d) + " out of range for base " +
                                        std::to_string(base));
        out.push_back(d);
    }
    return out;
}

// Sequential digit reader over any Angle form.
class DigitCursor {
public:
    DigitCursor(const Angle& a, int base) : a_(a), base_(base) {
        if (a.form() == Angle::Form::rational) {
            rem_ = a.value().num();
            den_ = a.value().den();
        }
    }
    int next() {
        if (a_.form() == Angle::Form::rational) {
            __int128 t = (__int128)rem_ * base_;
            int d = (int)(t / den_);
            rem_ = (std::int64_t)(t % den_);
            return d;
        }
        return a_.digit(n_++, base_);
    }

private:
    const Angle& a_;
    int base_;
    std::int64_t n_ = 0;
    std::int64_t rem_ = 0, den_ = 1;
};

}  // namespace

Rational parse_rational(const std::string& text) {
    std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            std::size_t pos = 0;
            std::int64_t n = std::stoll(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
            return Rational(n);
        }
        std::size_t p1 = 0, p2 = 0;
        std::int64_t n = std::stoll(text.substr(0, slash), &p1);
        std::int64_t d = std::stoll(text.substr(slash + 1), &p2);
        if (p1 != slash || p2 != text.size() - slash - 1)
            throw std::invalid_argument(text);
        return Rational(n, d);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational token '" + text + "'");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("rational token out of range '" + text + "'");
    }
}

SturmianProgram::SturmianProgram(Rational alpha, Rational rho)
    : alpha_(alpha), rho_(rho.mod1()) {
    if (!(alpha > Rational(0) && alpha < Rational(1)))
        throw std::invalid_argument("sturmian: alpha must lie in (0,1)");
}

int SturmianProgram::digit(std::int64_t n) const {
    // frac(rho + n*alpha) >= 1 - alpha ?
    __int128 Q = (__int128)alpha_.den() * rho_.den();
    __int128 t = ((__int128)rho_.num() * alpha_.den() +
                  (__int128)(n % alpha_.den()) * alpha_.num() * rho_.den()) % Q;
    if (t < 0) t += Q;
    return t >= (__int128)(alpha_.den() - alpha_.num()) * rho_.den() ? 1 : 0;
}

std::string SturmianProgram::spec_shifted(std::int64_t shift) const {
    Rational rho = (rho_ + alpha_ * Rational(shift % alpha_.den())).mod1();
    return "sturmian(alpha=" + alpha_.str() + ",rho=" + rho.str() + ")";
}

SubstProgram::SubstProgram(int base, std::vector<int> axiom,
                           std::vector<std::vector<int>> rules)
    : base_(base), axiom_(std::move(axiom)), rules_(std::move(rules)) {
    if (base_ < 2 || base_ > 10) throw std::invalid_argument("subst: base must be 2..10");
    if (axiom_.empty()) throw std::invalid_argument("subst: empty axiom");
    if ((int)rules_.size() != base_) throw std::invalid_argument("subst: need a rule per digit");
    for (auto& w : rules_) {
        if (w.empty()) throw std::invalid_argument("subst: empty rule image");
        for (int d : w)
            if (d < 0 || d >= base_) throw std::invalid_argument("subst: rule digit out of range");
    }
    for (int d : axiom_)
        if (d < 0 || d >= base_) throw std::invalid_argument("subst: axiom digit out of range");
    buf_ = axiom_;
}

void SubstProgram::expand_to(std::size_t len) const {
    while (buf_.size() < len) {
        std::vector<int> next;
        next.reserve(buf_.size() * 2);
        for (int d : buf_) {
            const auto& w = rules_[d];
            next.insert(next.end(), w.begin(), w.end());
            if (next.size() > (std::size_t)1 << 22)
                throw std::overflow_error("subst: expansion exceeds buffer cap");
        }
        if (next.size() <= buf_.size())
            throw std::invalid_argument("subst: substitution does not expand");
        buf_ = std::move(next);
    }
}

int SubstProgram::digit(std::int64_t n) const {
    expand_to((std::size_t)n + 1);
    return buf_[(std::size_t)n];
}

std::string SubstProgram::spec_shifted(std::int64_t shift) const {
    std::string s = "subst(base=" + std::to_string(base_) + ";axiom=" + digits_str(axiom_) + ";rules=";
    for (int d = 0; d < base_; ++d) {
        if (d) s += ",";
        s += std::to_string(d) + ":" + digits_str(rules_[d]);
    }
    if (shift) s += ";shift=" + std::to_string(shift);
    s += ")";
    return s;
}

Angle Angle::from_rational(const Rational& r) {
    Angle a;
    a.form_ = Form::rational;
    a.value_ = r.mod1();
    return a;
}

Angle Angle::from_digits(int base, std::vector<int> pre, std::vector<int> per) {
    if (base < 2 || base > 10) throw std::invalid_argument("digit base must be 2..10");
    for (int d : pre)
        if (d < 0 || d >= base) throw std::invalid_argument("pre digit out of range");
    for (int d : per)
        if (d < 0 || d >= base) throw std::invalid_argument("per digit out of range");
    Angle a;
    a.form_ = Form::digits;
    a.base_ = base;
    a.value_ = digits_to_rational(base, pre, per);
    a.pre_ = std::move(pre);
    a.per_ = std::move(per);
    return a;
}

Angle Angle::from_program(std::shared_ptr<const DigitProgram> prog, std::int64_t shift) {
    Angle a;
    a.form_ = Form::stream;
    a.base_ = prog->base();
    a.prog_ = std::move(prog);
    a.shift_ = shift;
    return a;
}

const Rational& Angle::value() const {
    if (form_ == Form::stream)
        throw std::domain_error("stream angle has no exact rational value");
    return value_;
}

int Angle::digit(std::int64_t n, int base_hint) const {
    switch (form_) {
        case Form::rational: {
            int b = base_hint ? base_hint : base_;
            if (!b) throw std::invalid_argument("digit(): base required for rational angle");
            // digit n = floor(p * b^(n+1) / q) mod b, via iterated remainders
            std::int64_t rem = value_.num();
            int d = 0;
            for (std::int64_t i = 0; i <= n; ++i) {
                __int128 t = (__int128)rem * b;
                d = (int)(t / value_.den());
                rem = (std::int64_t)(t % value_.den());
            }
            return d;
        }
        case Form::digits:
            if ((std::size_t)n < pre_.size()) return pre_[(std::size_t)n];
            if (per_.empty()) return 0;
            return per_[(std::size_t)((n - (std::int64_t)pre_.size()) % (std::int64_t)per_.size())];
        case Form::stream:
            return prog_->digit(n + shift_);
    }
    return 0;
}

Rational Angle::window(int k, int base_hint) const {
    if (exact()) return value_;
    int b = base_hint ? base_hint : base_;
    std::int64_t den = checked_pow(b, k);
    std::int64_t num = 0;
    for (int j = 0; j < k; ++j) num = num * b + digit(j);
    return Rational(num, den);
}

std::string Angle::str() const {
    switch (form_) {
        case Form::rational:
            return value_.str();
        case Form::digits:
            return "base=" + std::to_string(base_) + ";pre=" + digits_str(pre_) +
                   ";per=" + digits_str(per_);
        case Form::stream:
            return prog_->spec_shifted(shift_);
    }
    return "";
}

Angle Angle::sigma(int d) const {
    switch (form_) {
        case Form::rational:
            return from_rational((value_ * Rational(d)).mod1());
        case Form::digits: {
            if (base_ != d)
                throw std::invalid_argument("sigma: digit base " + std::to_string(base_) +
                                            " does not match degree " + std::to_string(d));
            std::vector<int> pre = pre_, per = per_;
            if (!pre.empty()) {
                pre.erase(pre.begin());
            } else if (!per.empty()) {
                std::rotate(per.begin(), per.begin() + 1, per.end());
            }
            return from_digits(base_, std::move(pre), std::move(per));
        }
        case Form::stream:
            if (base_ != d)
                throw std::invalid_argument("sigma: stream base does not match degree");
            return from_program(prog_, shift_ + 1);
    }
    return *this;
}

std::strong_ordering compare_exact(const Angle& a, const Angle& b) {
    return a.value() <=> b.value();
}

std::strong_ordering compare_angles(const Angle& a, const Angle& b, int precision) {
    if (a.exact() && b.exact()) return compare_exact(a, b);
    int base = 0;
    if (!a.exact()) base = a.base();
    if (!b.exact()) {
        if (base && b.base() != base)
            throw std::invalid_argument("cannot compare streams of different bases");
        base = b.base();
    }
    // identical stream specs denote the same point
    if (!a.exact() && !b.exact() && a.str() == b.str())
        return std::strong_ordering::equal;
    if (precision <= 0)
        throw UndecidedAtPrecision("stream comparison with zero digit budget");

    DigitCursor ca(a, base), cb(b, base);
    for (int j = 0; j < precision; ++j) {
        int da = ca.next(), db = cb.next();
        if (da == db) continue;
        // a carry tail (x, base-1, base-1, ...) equals (x+1, 0, 0, ...); only
        // that pattern can still collapse to equality, so scan it out
        bool a_low = da < db;
        if ((a_low && db == da + 1) || (!a_low && da == db + 1)) {
            DigitCursor& lo = a_low ? ca : cb;
            DigitCursor& hi = a_low ? cb : ca;
            for (int i = j + 1; i < precision; ++i) {
                if (lo.next() != base - 1 || hi.next() != 0)
                    return a_low ? std::strong_ordering::less : std::strong_ordering::greater;
            }
            throw UndecidedAtPrecision("carry tail unresolved after " +
                                       std::to_string(precision) + " digits");
        }
        return a_low ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    throw UndecidedAtPrecision("angles agree on first " + std::to_string(precision) + " digits");
}

Rational angle_distance(const Angle& a, const Angle& b, int precision) {
    int base = !a.exact() ? a.base() : (!b.exact() ? b.base() : 0);
    Rational wa = base ? a.window(precision, base) : a.value();
    Rational wb = base ? b.window(precision, base) : b.value();
    Rational d = (wa - wb).mod1();
    Rational e = Rational(1) - d;
    return d < e ? d : e;
}

namespace {

// b^k in 128 bits; the reduced fractions handed back to Rational are small
// even when the raw power is not
__int128 pow_i128(int b, std::size_t k) {
    __int128 v = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (v > ((__int128)1 << 119))
            throw std::overflow_error("digit expansion too long to evaluate");
        v *= b;
    }
    return v;
}

}  // namespace

Rational digits_to_rational(int base, const std::vector<int>& pre,
                            const std::vector<int>& per) {
    __int128 pk = pow_i128(base, pre.size());
    __int128 pre_num = 0;
    for (int d : pre) pre_num = pre_num * base + d;
    Rational v = Rational::from_i128(pre_num, pk);
    if (!per.empty()) {
        __int128 pm = pow_i128(base, per.size());
        __int128 per_num = 0;
        for (int d : per) per_num = per_num * base + d;
        v = v + Rational::from_i128(per_num, pm - 1) / Rational::from_i128(pk, 1);
    }
    return v.mod1();
}

std::pair<std::vector<int>, std::vector<int>> rational_to_digits(const Rational& r, int d) {
    Rational v = r.mod1();
    if (v.den() > 1000000)
        throw std::overflow_error("rational_to_digits: denominator too large");
    std::vector<int> digits;
    std::map<std::int64_t, std::size_t> seen;  // remainder -> position
    std::int64_t rem = v.num();
    std::size_t cut;
    for (;;) {
        auto it = seen.find(rem);
        if (it != seen.end()) {
            cut = it->second;
            break;
        }
        seen[rem] = digits.size();
        __int128 t = (__int128)rem * d;
        digits.push_back((int)(t / v.den()));
        rem = (std::int64_t)(t % v.den());
    }
    std::vector<int> pre(digits.begin(), digits.begin() + cut);
    std::vector<int> per(digits.begin() + cut, digits.end());
    if (per.size() == 1 && per[0] == 0) per.clear();
    return {pre, per};
}

namespace {

// splits "k1=v1,k2=v2" / "k1=v1;k2=v2" into pairs
std::vector<std::pair<std::string, std::string>> split_kv(const std::string& body, char sep) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value in '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

Angle parse_angle(const std::string& raw) {
    std::string text = trimmed(raw);
    if (text.empty()) throw std::invalid_argument("empty angle token");

    if (text.rfind("sturmian(", 0) == 0 && text.back() == ')') {
        Rational alpha, rho;
        bool have_a = false, have_r = false;
        for (auto& [k, v] : split_kv(text.substr(9, text.size() - 10), ',')) {
            if (k == "alpha") { alpha = parse_rational(v); have_a = true; }
            else if (k == "rho") { rho = parse_rational(v); have_r = true; }
            else throw std::invalid_argument("sturmian: unknown key '" + k + "'");
        }
        if (!have_a || !have_r)
            throw std::invalid_argument("sturmian: need alpha and rho");
        return Angle::from_program(std::make_shared<SturmianProgram>(alpha, rho));
    }

    if (text.rfind("subst(", 0) == 0 && text.back() == ')') {
        int base = 0;
        std::int64_t shift = 0;
        std::string axiom_s, rules_s;
        for (auto& [k, v] : split_kv(text.substr(6, text.size() - 7), ';')) {
            if (k == "base") base = (int)parse_rational(v).num();
            else if (k == "axiom") axiom_s = v;
            else if (k == "rules") rules_s = v;
            else if (k == "shift") shift = parse_rational(v).num();
            else throw std::invalid_argument("subst: unknown key '" + k + "'");
        }
        if (!base || axiom_s.empty() || rules_s.empty())
            throw std::invalid_argument("subst: need base, axiom and rules");
        std::vector<std::vector<int>> rules((std::size_t)base);
        std::vector<bool> have((std::size_t)base, false);
        std::stringstream ss(rules_s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            std::size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("subst: rule needs digit:word");
            auto lhs = parse_digit_word(item.substr(0, colon), base);
            if (lhs.size() != 1) throw std::invalid_argument("subst: rule lhs must be one digit");
            rules[(std::size_t)lhs[0]] = parse_digit_word(item.substr(colon + 1), base);
            have[(std::size_t)lhs[0]] = true;
        }
        for (int d = 0; d < base; ++d)
            if (!have[(std::size_t)d])
                throw std::invalid_argument("subst: missing rule for digit " + std::to_string(d));
        return Angle::from_program(
            std::make_shared<SubstProgram>(base, parse_digit_word(axiom_s, base), std::move(rules)),
            shift);
    }

    if (text.find("base=") != std::string::npos) {
        int base = 0;
        bool have_pre = false, have_per = false;
        std::string pre_s, per_s;
        for (auto& [k, v] : split_kv(text, ';')) {
            if (k == "base") base = (int)parse_rational(v).num();
            else if (k == "pre") { pre_s = v; have_pre = true; }
            else if (k == "per") { per_s = v; have_per = true; }
            else throw std::invalid_argument("digit angle: unknown key '" + k + "'");
        }
        if (!base || !have_pre || !have_per)
            throw std::invalid_argument("digit angle: need base, pre and per");
        return Angle::from_digits(base, parse_digit_word(pre_s, base),
                                  parse_digit_word(per_s, base));
    }

    return Angle::from_rational(parse_rational(text));
}

}  // namespace lamdyn
