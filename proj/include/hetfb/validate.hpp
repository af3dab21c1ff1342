#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetfb/scenario.hpp"

namespace hetfb {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = default_seed;
  unsigned feedback_m = 4;
  unsigned drops = 20;
  unsigned slots_per_drop = 1000;
  unsigned threads_hint = 0;
};

// Oracle cross-checks on the scenario's first drop plus reference profiles:
// closed form vs quadrature, recurrence vs convolution, simulation vs analysis.
std::vector<ValidationCheck> run_validation(const Scenario& s, const ValidationOptions& opt);

}  // namespace hetfb
