#include "legrip/report.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace legrip {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string join_indices(const std::vector<std::uint32_t>& idx) {
  std::ostringstream os;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) os << ',';
    os << idx[i];
  }
  return os.str();
}

std::string to_kv(const Record& rec) {
  std::ostringstream os;
  os << "check=" << rec.check;
  for (const auto& [key, value] : rec.fields) {
    os << ' ' << key << '=';
    std::visit(
        [&os](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>)
            os << v;
          else if constexpr (std::is_same_v<T, double>)
            os << format_double(v);
          else if constexpr (std::is_same_v<T, bool>)
            os << (v ? "true" : "false");
          else
            os << v;
        },
        value);
  }
  return os.str();
}

std::string to_json(const Record& rec) {
  nlohmann::ordered_json j;
  j["check"] = rec.check;
  for (const auto& [key, value] : rec.fields)
    std::visit([&](const auto& v) { j[key] = v; }, value);
  return j.dump();
}

}  // namespace legrip
