#pragma once

// Randomized property checks run by `ridel verify`. Deterministic for a seed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ridel {

struct PropertyResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  std::string detail;  // worst case seen, for the report

  bool ok() const { return passed == total; }
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;

  bool ok() const;
};

/// Canonical suite names, excluding "all" and aliases.
const std::vector<std::string>& verify_suite_names();

/// Runs one suite, or every suite for "all". Throws InvalidInput for unknown names.
std::vector<SuiteReport> run_verify(const std::string& name, std::uint64_t seed);

}  // namespace ridel
