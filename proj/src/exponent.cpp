#include "degcalc/exponent.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "degcalc/error.hpp"

namespace degcalc {

namespace {

using i128 = __int128;

bool fits(i128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() / 4 &&
           v <= std::numeric_limits<std::int64_t>::max() / 4;
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Normalizes num/den; falls back to a real exponent on overflow.
Exponent make_rational(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (!fits(num) || !fits(den))
        return Exponent::real(static_cast<double>(num) / static_cast<double>(den));
    return Exponent::rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Exponent Exponent::rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ConfigError("exponent with zero denominator");
    Exponent e;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    e.rational_ = true;
    e.num_ = num;
    e.den_ = den;
    return e;
}

Exponent Exponent::real(double value) {
    if (!std::isfinite(value)) throw ConfigError("non-finite exponent");
    Exponent e;
    e.rational_ = false;
    e.real_ = value;
    return e;
}

Exponent Exponent::parse(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '(')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == ')')) text.remove_suffix(1);
    if (text.empty()) throw ConfigError("empty exponent");
    if (text.find_first_of(".eE") != std::string_view::npos) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw ConfigError("malformed exponent '" + std::string(text) + "'");
        return real(v);
    }
    auto slash = text.find('/');
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            throw ConfigError("malformed exponent '" + std::string(text) + "'");
        return v;
    };
    if (slash == std::string_view::npos) return rational(parse_int(text), 1);
    return rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

double Exponent::value() const noexcept {
    return rational_ ? static_cast<double>(num_) / static_cast<double>(den_) : real_;
}

bool Exponent::is_zero() const noexcept {
    return rational_ ? num_ == 0 : std::abs(real_) <= kTolerance;
}

bool Exponent::is_integer() const noexcept {
    if (rational_) return den_ == 1;
    return std::abs(real_ - std::round(real_)) <= kTolerance;
}

int Exponent::sign() const noexcept {
    if (is_zero()) return 0;
    return value() > 0 ? 1 : -1;
}

Exponent Exponent::operator-() const {
    if (rational_) return make_rational(-static_cast<i128>(num_), den_);
    return real(-real_);
}

Exponent operator+(const Exponent& a, const Exponent& b) {
    if (a.rational_ && b.rational_)
        return make_rational(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                             static_cast<i128>(a.den_) * b.den_);
    return Exponent::real(a.value() + b.value());
}

Exponent operator-(const Exponent& a, const Exponent& b) { return a + (-b); }

Exponent operator*(const Exponent& a, const Exponent& b) {
    if (a.rational_ && b.rational_)
        return make_rational(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
    return Exponent::real(a.value() * b.value());
}

Exponent operator/(const Exponent& a, const Exponent& b) {
    if (b.is_zero()) throw PreconditionError("division by a zero exponent");
    if (a.rational_ && b.rational_)
        return make_rational(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
    return Exponent::real(a.value() / b.value());
}

bool operator==(const Exponent& a, const Exponent& b) noexcept {
    if (a.rational_ && b.rational_) return a.num_ == b.num_ && a.den_ == b.den_;
    return std::abs(a.value() - b.value()) <= Exponent::kTolerance;
}

std::weak_ordering operator<=>(const Exponent& a, const Exponent& b) noexcept {
    if (a == b) return std::weak_ordering::equivalent;
    if (a.rational_ && b.rational_) {
        i128 l = static_cast<i128>(a.num_) * b.den_;
        i128 r = static_cast<i128>(b.num_) * a.den_;
        return l < r ? std::weak_ordering::less : std::weak_ordering::greater;
    }
    return a.value() < b.value() ? std::weak_ordering::less : std::weak_ordering::greater;
}

std::string Exponent::to_string() const {
    if (rational_) {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", real_);
    std::string s(buf);
    // Keep a marker so the text parses back as a real exponent.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

}  // namespace degcalc
