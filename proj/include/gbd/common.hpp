#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gbd {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline constexpr const char* kVersion = "0.1.0";

/// Error raised for malformed inputs and violated preconditions.
/// Internal invariant failures use std::logic_error instead, so the CLI can
/// distinguish exit code 1 (bad input) from 2 (internal assertion).
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline void internal_check(bool cond, const std::string& msg) {
  if (!cond) throw std::logic_error("internal: " + msg);
}

inline Int int_gcd(const Int& a, const Int& b) { return gcd(a, b); }

inline Int int_lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

inline long long ll_gcd(long long a, long long b) {
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

inline long long checked_ll(const Int& v, const char* what) {
  if (v < std::numeric_limits<long long>::min() || v > std::numeric_limits<long long>::max())
    throw Error(std::string(what) + ": value too large for machine index");
  return static_cast<long long>(v);
}

inline Rat rat(long long num, long long den = 1) { return Rat(Int(num), Int(den)); }

}  // namespace gbd
