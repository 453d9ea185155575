#include "legrip/bignat.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace legrip {

BigNat pow2(unsigned bits) {
  BigNat v = 1;
  return v << bits;
}

std::string to_hex(const BigNat& v) {
  std::ostringstream os;
  os << std::hex << v;
  std::string s = os.str();
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

BigNat from_hex(const std::string& s) {
  std::string body = s;
  if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) body = body.substr(2);
  if (body.empty()) throw std::invalid_argument("empty hex literal");
  for (char c : body) {
    if (!std::isxdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad hex literal: " + s);
  }
  return BigNat("0x" + body);
}

BigNat from_dec(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty decimal literal");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("bad decimal literal: " + s);
  }
  return BigNat(s);
}

bool fits_u64(const BigNat& v) {
  return v >= 0 && v <= BigNat(UINT64_MAX);
}

std::uint64_t to_u64(const BigNat& v) {
  if (!fits_u64(v)) throw std::overflow_error("value does not fit in 64 bits");
  return v.convert_to<std::uint64_t>();
}

}  // namespace legrip
