#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "llsk/errors.hpp"

namespace llsk {

// All enumerative counts are exact; no floating point anywhere.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt factorial(long long n) {
    if (n < 0) throw input_error("factorial of negative argument");
    BigInt acc = 1;
    for (long long i = 2; i <= n; ++i) acc *= i;
    return acc;
}

// Exact binomial coefficient; the running product is divisible at each
// step, so the division never truncates.
inline BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt acc = 1;
    for (long long i = 1; i <= k; ++i) {
        acc *= n - k + i;
        acc /= i;
    }
    return acc;
}

} // namespace llsk
