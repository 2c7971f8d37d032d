#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cubic/errors.hpp"

namespace cubic {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline i64 add_checked(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 addition overflow");
    return r;
}

inline i64 sub_checked(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 subtraction overflow");
    return r;
}

inline i64 mul_checked(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 multiplication overflow");
    return r;
}

inline i128 mul_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int128 multiplication overflow");
    return r;
}

inline i128 add_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int128 addition overflow");
    return r;
}

inline i64 narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("value does not fit in int64");
    return static_cast<i64>(v);
}

inline i64 abs64(i64 a) { return a < 0 ? -a : a; }

i64 gcd(i64 a, i64 b);

// returns g = gcd(a,b) >= 0 with s*a + t*b = g
i64 xgcd(i64 a, i64 b, i64& s, i64& t);

// floor division and non-negative remainder
i64 floor_div(i64 a, i64 b);
i64 mod(i64 a, i64 m);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
i64 inv_mod(i64 a, i64 m);

// Legendre symbol (a/p), p an odd prime; returns 0, 1 or -1
int legendre(i64 a, i64 p);

bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);

// trial division; returns (prime, exponent) pairs for |n|
std::vector<std::pair<i64, int>> factor(i64 n);

i64 isqrt(i64 n);
bool is_square(i64 n);

int valuation(i128 n, i64 p);

std::string to_string(i128 v);

}  // namespace cubic
