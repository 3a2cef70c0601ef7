#pragma once

#include <map>
#include <string>

namespace pasurf {

/// Outcome of a theorem-level check over a grid. `values` holds the raw
/// defects so callers can re-threshold; keys are stable names.
struct CheckReport {
  bool applicable = true;
  bool passed = false;
  std::string reason;  // why the hypotheses failed, when inapplicable
  std::map<std::string, double> values;

  static CheckReport inapplicable(std::string why) {
    CheckReport r;
    r.applicable = false;
    r.reason = std::move(why);
    return r;
  }
};

}  // namespace pasurf
