#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covert/scenario.hpp"

namespace covert {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Fast self-checks of the physics and power layers against closed forms,
/// Monte Carlo and brute-force search, plus the lifting identities, on
/// `instances` random realizations of `scenario`.
std::vector<CheckResult> run_invariant_suite(const Scenario& scenario, std::uint64_t seed,
                                             int instances = 20);

}  // namespace covert
