#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "core/error.hpp"

namespace scompress {

// Exact arithmetic everywhere labels or losses are compared. No floating
// point is permitted on any comparison path.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat make_rat(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "rational with zero denominator");
  return Rat(num, den);
}

inline std::string rat_to_string(const Rat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Accepts "a", "a/b", and an optional leading '-'.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) fail(ErrorCode::InvalidArgument, "empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "malformed rational literal '" + s + "'");
  }
}

inline BigInt rat_floor(const Rat& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

inline bool rat_is_int(const Rat& r) {
  return boost::multiprecision::denominator(r) == 1;
}

// Exact integer power, exponent >= 0.
inline Rat rat_pow(const Rat& base, unsigned exp) {
  Rat out = 1;
  Rat b = base;
  unsigned e = exp;
  while (e) {
    if (e & 1u) out *= b;
    b *= b;
    e >>= 1u;
  }
  return out;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Largest a/2^bits with (a/2^bits)^p <= x, for x in [0,1]. Certified lower
// bound on x^(1/p); the matching upper bound is lower + 2^-bits.
inline Rat rat_root_lower(const Rat& x, unsigned p, unsigned bits = 40) {
  if (x < 0 || x > 1) fail(ErrorCode::InvalidArgument, "root bounding expects x in [0,1]");
  if (p == 0) fail(ErrorCode::InvalidArgument, "zero-th root");
  BigInt den = BigInt(1) << bits;
  BigInt lo = 0, hi = den;  // invariant: (lo/den)^p <= x < ((hi+1)/den)^p
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (rat_pow(Rat(mid, den), p) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return Rat(lo, den);
}

inline int ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  int k = 0;
  std::uint64_t v = 1;
  while (v < n) {
    v <<= 1;
    ++k;
  }
  return k;
}

}  // namespace scompress
