#pragma once

#include <compare>
#include <cstdint>

#include "rtsusp/errors.hpp"

namespace rtsusp {

// discrete model time: a non-negative 64-bit tick count whose arithmetic
// throws OverflowError instead of wrapping
struct TimeTicks {
    std::uint64_t v = 0;

    constexpr TimeTicks() = default;
    constexpr TimeTicks(std::uint64_t x) : v(x) {}

    constexpr std::uint64_t value() const { return v; }
    auto operator<=>(const TimeTicks&) const = default;
};

inline TimeTicks operator+(TimeTicks a, TimeTicks b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a.v, b.v, &r))
        throw OverflowError("tick addition overflows 64 bits");
    return TimeTicks(r);
}

// subtraction below zero is an error, ticks are never negative
inline TimeTicks operator-(TimeTicks a, TimeTicks b) {
    if (b.v > a.v)
        throw OverflowError("tick subtraction below zero");
    return TimeTicks(a.v - b.v);
}

inline TimeTicks operator*(TimeTicks a, TimeTicks b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a.v, b.v, &r))
        throw OverflowError("tick multiplication overflows 64 bits");
    return TimeTicks(r);
}

inline TimeTicks& operator+=(TimeTicks& a, TimeTicks b) { a = a + b; return a; }
inline TimeTicks& operator-=(TimeTicks& a, TimeTicks b) { a = a - b; return a; }

// ceil(a/b); safe for a = 0, rejects b = 0
inline TimeTicks ceil_div(TimeTicks a, TimeTicks b) {
    if (b.v == 0)
        throw RangeError("tick division by zero");
    if (a.v == 0)
        return TimeTicks(0);
    return TimeTicks((a.v - 1) / b.v + 1);
}

} // namespace rtsusp
