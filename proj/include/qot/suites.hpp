#pragma once

#include "qot/io.hpp"
#include "qot/metrics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qot {

struct SuiteConfig {
  int samples = 100;
  int n = 2;
  int d = 3;
  std::uint64_t seed = 20240601;
  int jobs = 1;
  Engine engine = Engine::Auto;
  SolverOptions solver;
};

struct SuiteCheck {
  std::string property;
  bool pass = false;
  double worst = 0.0;      // the quantity compared against `tolerance`
  double tolerance = 0.0;
  int samples = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  json witnesses = json::array();
  int fallback_samples = 0;  // qutrit samples that reached the zero-diagonal search

  bool pass() const;
  json to_json(const SuiteConfig& cfg) const;
};

const std::vector<std::string>& suite_names();
// Throws InvalidInput for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace qot
