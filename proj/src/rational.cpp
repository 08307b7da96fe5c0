#include "rtsusp/rational.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>

namespace rtsusp {

namespace {

using i128 = __int128;

const i128 i128_min = static_cast<i128>(static_cast<unsigned __int128>(1) << 127);

i128 abs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("rational addition overflows 128 bits");
    return r;
}

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("rational multiplication overflows 128 bits");
    return r;
}

std::string decimal(i128 x) {
    if (x == 0)
        return "0";
    bool neg = x < 0;
    unsigned __int128 u =
        neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
    std::string digits;
    while (u != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<unsigned>(u % 10)));
        u /= 10;
    }
    if (neg)
        digits.push_back('-');
    return std::string(digits.rbegin(), digits.rend());
}

} // namespace

Rational Rational::make(__int128 num, __int128 den) {
    if (den == 0)
        throw RangeError("rational denominator is zero");
    if (num == i128_min || den == i128_min)
        throw OverflowError("rational component out of range");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rational r;
    r.num_ = num;
    r.den_ = den;
    return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = make(static_cast<i128>(num), static_cast<i128>(den));
}

double Rational::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
    if (den_ == 1)
        return decimal(num_);
    return decimal(num_) + "/" + decimal(den_);
}

Rational Rational::parse(const std::string& text) {
    if (text.empty())
        throw InputError("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        if (a.empty() || b.empty())
            throw InputError("malformed rational literal: " + text);
        char* end = nullptr;
        errno = 0;
        long long n = std::strtoll(a.c_str(), &end, 10);
        if (*end != '\0' || errno == ERANGE)
            throw InputError("malformed rational literal: " + text);
        errno = 0;
        long long d = std::strtoll(b.c_str(), &end, 10);
        if (*end != '\0' || errno == ERANGE)
            throw InputError("malformed rational literal: " + text);
        return Rational(n, d);
    }
    // decimal form: sign, digits, optional fraction digits
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    i128 num = 0, den = 1;
    bool any = false, frac = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (frac)
                throw InputError("malformed decimal literal: " + text);
            frac = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw InputError("malformed decimal literal: " + text);
        num = checked_add(checked_mul(num, 10), c - '0');
        if (frac)
            den = checked_mul(den, 10);
        any = true;
    }
    if (!any)
        throw InputError("malformed decimal literal: " + text);
    return make(neg ? -num : num, den);
}

Rational operator+(const Rational& a, const Rational& b) {
    // reduce across the pair first to keep intermediates small
    i128 g = gcd128(a.den_, b.den_);
    i128 bd = b.den_ / g;
    i128 lhs = checked_mul(a.num_, bd);
    i128 rhs = checked_mul(b.num_, a.den_ / g);
    return Rational::make(checked_add(lhs, rhs), checked_mul(a.den_, bd));
}

Rational operator-(const Rational& a, const Rational& b) {
    Rational nb = b;
    nb.num_ = -nb.num_;
    return a + nb;
}

Rational operator*(const Rational& a, const Rational& b) {
    // cross-reduce before multiplying
    i128 g1 = gcd128(a.num_, b.den_);
    i128 g2 = gcd128(b.num_, a.den_);
    i128 n = checked_mul(a.num_ / g1, b.num_ / g2);
    i128 d = checked_mul(a.den_ / g2, b.den_ / g1);
    return Rational::make(n, d);
}

bool operator==(const Rational& a, const Rational& b) {
    // both reduced, so representation equality is value equality
    return a.num_ == b.num_ && a.den_ == b.den_;
}

bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

bool operator<(const Rational& a, const Rational& b) {
    // cross products can exceed 128 bits; go through the reduced common
    // denominator instead, which the operands' construction kept bounded
    i128 g = gcd128(a.den_, b.den_);
    i128 lhs = checked_mul(a.num_, b.den_ / g);
    i128 rhs = checked_mul(b.num_, a.den_ / g);
    return lhs < rhs;
}

bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }
bool operator>(const Rational& a, const Rational& b) { return b < a; }
bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

} // namespace rtsusp
