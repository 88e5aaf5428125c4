#pragma once

#include <string>
#include <vector>

namespace dpsqm {

// One named check with the norms it measured. norm_interior is the value
// the tolerance applies to; norm_full is reported for context only (it may
// legitimately carry truncation-edge defects).
struct CheckReport {
  std::string test;
  double norm_interior = 0.0;
  double norm_full = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// True when every report passes.
bool all_pass(const std::vector<CheckReport>& reports);

}  // namespace dpsqm
