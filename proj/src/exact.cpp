#include "omac/exact.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace omac {

namespace {

constexpr int kMaxScale = 30;

__int128 pow10(int k) {
    __int128 r = 1;
    for (int i = 0; i < k; ++i) r *= 10;
    return r;
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_string128(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    std::string s;
    while (v != 0) {
        int d = static_cast<int>(v % 10);
        s.insert(s.begin(), static_cast<char>('0' + (d < 0 ? -d : d)));
        v /= 10;
    }
    return neg ? "-" + s : s;
}

}  // namespace

Decimal Decimal::from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite constraint value");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general);
    return parse(std::string(buf, res.ptr));
}

Decimal Decimal::parse(const std::string& text) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
    __int128 mant = 0;
    int scale = 0;
    bool seen_dot = false, any_digit = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad number: " + text);
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            any_digit = true;
            mant = mant * 10 + (c - '0');
            if (seen_dot) ++scale;
            if (mant > static_cast<__int128>(INT64_MAX)) throw std::overflow_error("number too precise: " + text);
        } else {
            break;
        }
    }
    if (!any_digit) throw std::invalid_argument("bad number: " + text);
    int exp = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        exp = std::stoi(text.substr(pos + 1));
        pos = text.size();
    }
    if (pos != text.size()) throw std::invalid_argument("bad number: " + text);
    scale -= exp;
    while (scale < 0) {
        mant *= 10;
        ++scale;
        if (mant > static_cast<__int128>(INT64_MAX)) throw std::overflow_error("number too large: " + text);
    }
    while (scale > 0 && mant % 10 == 0) {
        mant /= 10;
        --scale;
    }
    if (scale > kMaxScale) throw std::overflow_error("number too small: " + text);
    return Decimal{static_cast<std::int64_t>(neg ? -mant : mant), scale};
}

double Decimal::to_double() const {
    return std::stod(str());
}

std::string Decimal::str() const {
    std::string digits = to_string128(mantissa < 0 ? -static_cast<__int128>(mantissa) : static_cast<__int128>(mantissa));
    if (scale > 0) {
        if (digits.size() <= static_cast<std::size_t>(scale)) digits.insert(0, static_cast<std::size_t>(scale) + 1 - digits.size(), '0');
        digits.insert(digits.size() - static_cast<std::size_t>(scale), ".");
        while (digits.back() == '0') digits.pop_back();
        if (digits.back() == '.') digits.pop_back();
    }
    return (mantissa < 0 ? "-" : "") + digits;
}

__int128 Decimal::at_scale(int target) const {
    if (target < scale) throw std::logic_error("Decimal::at_scale: target below scale");
    __int128 f = pow10(target - scale);
    __int128 m = mantissa;
    __int128 limit = static_cast<__int128>(1) << 100;
    if (f != 0 && (m > limit / f || -m > limit / f)) throw std::overflow_error("decimal rescale overflow");
    return m * f;
}

bool operator==(const Decimal& a, const Decimal& b) {
    return a.mantissa == b.mantissa && a.scale == b.scale;
}

Rational::Rational(__int128 num, __int128 den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    __int128 g = gcd128(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::from_decimal(const Decimal& d) {
    return Rational(d.mantissa, pow10(d.scale));
}

double Rational::to_double() const {
    // long double keeps the quotient correctly rounded for the magnitudes used here
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Rational::str() const {
    return den_ == 1 ? to_string128(num_) : to_string128(num_) + "/" + to_string128(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}
bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
}
bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
}

}  // namespace omac
