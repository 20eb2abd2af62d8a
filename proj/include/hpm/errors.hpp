#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hpm {

// Every failure the toolchain can raise, across all modules. Codes are
// stable identifiers; the printable names below appear in CLI output and
// validation reports.
enum class Errc {
  duplicate_id,
  malformed_attribute,
  unknown_holon,
  unknown_state,
  unknown_process,
  unknown_resource,
  mixed_input_kinds,
  time_order_violation,
  non_monotonic_timestamp,
  invalid_model,
  xml_syntax,
  unknown_namespace,
  dangling_ref,
  schema_violation,
  unsupported_pair,
  unmapped_concept,
  mismatched_pair,
  rules_syntax,
  ambiguous_sublot,
  unknown_tag,
  ambiguous_tag,
  not_elementary,
  no_observations,
  not_divergent,
  io_error,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::malformed_attribute: return "MalformedAttribute";
    case Errc::unknown_holon: return "UnknownHolon";
    case Errc::unknown_state: return "UnknownStateId";
    case Errc::unknown_process: return "UnknownProcess";
    case Errc::unknown_resource: return "UnknownResource";
    case Errc::mixed_input_kinds: return "MixedInputKinds";
    case Errc::time_order_violation: return "TimeOrderViolation";
    case Errc::non_monotonic_timestamp: return "NonMonotonicTimestamp";
    case Errc::invalid_model: return "InvalidModel";
    case Errc::xml_syntax: return "XmlSyntax";
    case Errc::unknown_namespace: return "UnknownNamespace";
    case Errc::dangling_ref: return "DanglingRef";
    case Errc::schema_violation: return "SchemaViolation";
    case Errc::unsupported_pair: return "UnsupportedPair";
    case Errc::unmapped_concept: return "UnmappedConcept";
    case Errc::mismatched_pair: return "MismatchedPair";
    case Errc::rules_syntax: return "RulesSyntax";
    case Errc::ambiguous_sublot: return "AmbiguousSublot";
    case Errc::unknown_tag: return "UnknownTag";
    case Errc::ambiguous_tag: return "AmbiguousTag";
    case Errc::not_elementary: return "NotElementary";
    case Errc::no_observations: return "NoObservations";
    case Errc::not_divergent: return "NotDivergent";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string entity, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) +
                           (entity.empty() ? "" : " [" + entity + "]") + ": " + message),
        code_(code),
        entity_(std::move(entity)) {}

  Errc code() const noexcept { return code_; }
  const std::string& entity() const noexcept { return entity_; }

 private:
  Errc code_;
  std::string entity_;
};

[[noreturn]] inline void fail(Errc code, std::string entity, const std::string& message) {
  throw Error(code, std::move(entity), message);
}

}  // namespace hpm
