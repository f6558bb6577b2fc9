#pragma once

#include <cstdint>

#include "ncsymp/report.hpp"
#include "ncsymp/types.hpp"

namespace ncsymp {

struct SuiteConfig {
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  int instances = 5;  // random instances per property and algebra
  int degree_bound = 4;
};

/// The full invariant battery on small builder algebras. The seed and
/// configuration are recorded in the report data; equal configurations give
/// identical reports.
Report run_suite(const SuiteConfig& cfg);

}  // namespace ncsymp
