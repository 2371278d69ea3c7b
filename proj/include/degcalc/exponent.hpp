#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace degcalc {

/// A real exponent that stays an exact rational as long as every input is
/// rational. Mixed arithmetic falls back to double.
///
/// Equality is exact between two rationals and uses the absolute tolerance
/// `kTolerance` otherwise.
class Exponent {
public:
    static constexpr double kTolerance = 1e-12;

    constexpr Exponent() = default;
    // Implicit on purpose: integer literals are the most common exponents.
    constexpr Exponent(int n) : num_(n), den_(1) {}  // NOLINT

    static Exponent rational(std::int64_t num, std::int64_t den = 1);
    static Exponent real(double value);

    /// Parses "3", "-3/2", "0.25", "2.718281828459045". Integer and n/d
    /// literals are kept exact; anything with '.' or 'e' is real.
    static Exponent parse(std::string_view text);

    bool is_rational() const noexcept { return rational_; }
    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept;

    bool is_zero() const noexcept;
    bool is_integer() const noexcept;
    /// Sign with tolerance: -1, 0, +1.
    int sign() const noexcept;

    Exponent operator-() const;
    friend Exponent operator+(const Exponent& a, const Exponent& b);
    friend Exponent operator-(const Exponent& a, const Exponent& b);
    friend Exponent operator*(const Exponent& a, const Exponent& b);
    friend Exponent operator/(const Exponent& a, const Exponent& b);
    Exponent& operator+=(const Exponent& b) { return *this = *this + b; }
    Exponent& operator-=(const Exponent& b) { return *this = *this - b; }

    friend bool operator==(const Exponent& a, const Exponent& b) noexcept;
    /// Tolerant three-way comparison; `equivalent` iff `a == b`.
    friend std::weak_ordering operator<=>(const Exponent& a, const Exponent& b) noexcept;

    /// "3", "-3/2", or the shortest round-tripping decimal for reals.
    std::string to_string() const;

private:
    bool rational_ = true;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    double real_ = 0.0;
};

}  // namespace degcalc
