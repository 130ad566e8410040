#pragma once
// Verification suites behind `ce2 verify`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ce2/serialize.hpp"

namespace ce2 {

struct RunConfig {
  int N = 48;
  int P = 6;
  int W = 8;
  double abs_tol = 1e-8;
  double conv_factor = 0.6;
  bool extended = false;
  std::uint64_t seed = 1;

  void validate() const;
};

RunConfig run_config_from_json(const Json& j);
Json run_config_to_json(const RunConfig& c);

struct CheckResult {
  std::string id;
  Json params;
  double value = 0.0;
  double expected = 0.0;
  double abs_err = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_pass() const;
  Json to_json() const;
};

const std::vector<std::string>& suite_names();
// Throws UsageError for an unknown suite.
SuiteReport run_suite(const std::string& name, const RunConfig& cfg);

// Worker count: CE2_THREADS if set and positive, else the hardware count.
int thread_cap();
// Runs fn(0..n-1) on up to thread_cap() threads; exceptions are rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

// Two-cutoff decision used by the convergence checks: the coarse value is
// already at the noise floor, or the fine value shrank by conv_factor.
bool shrinks(double coarse, double fine, double conv_factor, double floor = 1e-13);

}  // namespace ce2
