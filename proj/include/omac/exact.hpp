#pragma once

#include <cstdint>
#include <string>

namespace omac {

// A finite decimal m * 10^-scale. Constraint coefficients and thresholds are
// kept in this form so that "count/n <= 0.3" means exactly 3/10.
struct Decimal {
    std::int64_t mantissa = 0;
    int scale = 0;

    static Decimal from_double(double v);  // shortest round-trip rendering
    static Decimal parse(const std::string& text);
    double to_double() const;
    std::string str() const;

    // mantissa rescaled to the given (larger or equal) scale; throws on overflow
    __int128 at_scale(int target) const;
};

bool operator==(const Decimal& a, const Decimal& b);

// Minimal exact rational on 128-bit integers, normalized with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(__int128 num, __int128 den = 1);
    static Rational from_decimal(const Decimal& d);

    __int128 num() const { return num_; }
    __int128 den() const { return den_; }
    double to_double() const;
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

private:
    __int128 num_ = 0;
    __int128 den_ = 1;
};

}  // namespace omac
