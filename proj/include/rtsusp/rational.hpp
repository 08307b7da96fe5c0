#pragma once

#include <cstdint>
#include <string>

#include "rtsusp/errors.hpp"

namespace rtsusp {

// exact fraction, always reduced, denominator > 0; stored in 128-bit
// integers so utilization sums over tasks with near-coprime periods stay
// exact; overflow during arithmetic is an error, precision is never dropped
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    double to_double() const;
    std::string str() const; // "22/45", integers render without the "/1"

    // accepts "3", "0.15" and "3/20"
    static Rational parse(const std::string& text);

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b);
    friend bool operator!=(const Rational& a, const Rational& b);
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b);
    friend bool operator>=(const Rational& a, const Rational& b);

private:
    static Rational make(__int128 num, __int128 den);

    __int128 num_ = 0;
    __int128 den_ = 1;
};

} // namespace rtsusp
