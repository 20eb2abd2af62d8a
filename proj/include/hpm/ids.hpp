#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace hpm {

// Opaque string identifier, one distinct C++ type per entity category so ids
// of different categories cannot be mixed up.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}
  explicit Id(std::string_view v) : value(v) {}
  explicit Id(const char* v) : value(v) {}

  bool empty() const { return value.empty(); }
  const std::string& str() const { return value; }

  friend auto operator<=>(const Id&, const Id&) = default;
};

struct HolonTag {};
struct StateTag {};
struct ProcessTag {};
struct ProcessInstanceTag {};
struct ResourceTag {};
struct FlowTag {};

using HolonId = Id<HolonTag>;
using StateId = Id<StateTag>;
using ProcessId = Id<ProcessTag>;
using ProcessInstanceId = Id<ProcessInstanceTag>;
using ResourceId = Id<ResourceTag>;
using FlowId = Id<FlowTag>;

// Identifiers must be xml:id-compatible tokens (an NCName subset):
// leading letter or underscore, then letters, digits, '.', '-', '_'.
inline bool is_id_token(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s[0]) && s[0] != '_') return false;
  for (char c : s.substr(1))
    if (!alpha(c) && !digit(c) && c != '.' && c != '-' && c != '_') return false;
  return true;
}

}  // namespace hpm
