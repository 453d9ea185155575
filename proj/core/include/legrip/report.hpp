// Structured result records: one-line key=value text and JSON with stable
// field order, so identical runs serialize byte-identically.
#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace legrip {

// Shortest round-trippable-enough form used for every double we print.
std::string format_double(double v);

std::string join_indices(const std::vector<std::uint32_t>& idx);  // "1,4,7"

struct Record {
  using Value = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

  std::string check;
  std::vector<std::pair<std::string, Value>> fields;  // emitted in insertion order

  Record() = default;
  explicit Record(std::string name) : check(std::move(name)) {}

  // Exact-alternative dispatch; a plain overload set would let bool and
  // double decay to int.
  template <typename T>
  Record& add(std::string key, T value) {
    if constexpr (std::is_same_v<T, bool>)
      fields.emplace_back(std::move(key), Value(value));
    else if constexpr (std::is_floating_point_v<T>)
      fields.emplace_back(std::move(key), Value(static_cast<double>(value)));
    else if constexpr (std::is_integral_v<T> && std::is_signed_v<T>)
      fields.emplace_back(std::move(key), Value(static_cast<std::int64_t>(value)));
    else if constexpr (std::is_integral_v<T>)
      fields.emplace_back(std::move(key), Value(static_cast<std::uint64_t>(value)));
    else
      fields.emplace_back(std::move(key), Value(std::string(std::move(value))));
    return *this;
  }
};

std::string to_kv(const Record& rec);    // "check=rip k=2 delta=0.25 ..."
std::string to_json(const Record& rec);  // single-line JSON object, field order kept

}  // namespace legrip
