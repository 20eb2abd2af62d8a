#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace hpm {

// Dimensioned numeric value. The unit is a free-form string; an empty unit
// means a dimensionless number.
struct Quantity {
  double value = 0.0;
  std::string unit;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

// Attribute and property values are numbers-with-unit, text, or booleans.
using TypedValue = std::variant<Quantity, std::string, bool>;

// name -> value, unique names by construction of std::map.
using AttributeGroup = std::map<std::string, TypedValue>;

// The three attribute groups every state carries. Groups may be empty but
// all three always exist.
struct StateAttributes {
  AttributeGroup space;
  AttributeGroup shape;
  AttributeGroup time;

  friend bool operator==(const StateAttributes&, const StateAttributes&) = default;
};

inline std::string_view typed_value_kind(const TypedValue& v) {
  switch (v.index()) {
    case 0: return "number";
    case 1: return "text";
    default: return "boolean";
  }
}

// Shortest decimal that round-trips the double exactly.
inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_number(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::string typed_value_text(const TypedValue& v) {
  if (const auto* q = std::get_if<Quantity>(&v)) return format_number(q->value);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<bool>(v) ? "true" : "false";
}

}  // namespace hpm
