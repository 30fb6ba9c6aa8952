// Seeded property-check suites over every module's invariants, behind the
// `verify` CLI subcommand. Reports are deterministic for a fixed seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mscsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string note;  // optional extra context on failure
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
};

/// Runs every invariant suite with the given seed. `samples` scales the
/// generic property checks; suites with a pinned sample count keep it.
/// `inject_failure` corrupts one tolerance so the harness's failure path can
/// be exercised.
VerifyReport run_verification(std::uint64_t seed, int samples, bool inject_failure = false);

/// One line per check, fixed formatting (byte-identical for equal inputs).
std::string render_report(const VerifyReport& report);

}  // namespace mscsim
