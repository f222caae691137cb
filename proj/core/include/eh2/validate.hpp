#pragma once

#include <string>
#include <vector>

#include "eh2/system.hpp"

namespace eh2 {

// One invariant violation. `code` is stable and machine-readable
// ("zone.demand.negative", "truck.boiloff.gaseous", ...); `message` names the
// offending entity and coordinate.
struct Violation {
  std::string code;
  std::string message;
};

// Checks every SystemSpec invariant and returns the full list of violations,
// sorted by (code, message) so the result is independent of catalog entry
// order. An empty result means the spec is valid. Never throws: violations
// are data, not failures.
std::vector<Violation> validate_spec(const SystemSpec& spec);

std::string format_violations(const std::vector<Violation>& violations);

}  // namespace eh2
