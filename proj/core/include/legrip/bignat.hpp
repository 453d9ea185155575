// Arbitrary-precision nonnegative integers for primes, seeds and 2^H budgets.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace legrip {

// Values are used as nonnegative magnitudes throughout; cpp_int keeps a
// canonical limb representation so equality is representation-free.
using BigNat = boost::multiprecision::cpp_int;

// 2^bits
BigNat pow2(unsigned bits);

// Lowercase hex, no "0x" prefix. from_hex accepts an optional 0x prefix.
std::string to_hex(const BigNat& v);
BigNat from_hex(const std::string& s);

// Parse a decimal string; throws std::invalid_argument on junk.
BigNat from_dec(const std::string& s);

bool fits_u64(const BigNat& v);
std::uint64_t to_u64(const BigNat& v);  // throws if !fits_u64

}  // namespace legrip
