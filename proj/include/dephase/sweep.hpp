#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dephase/config.hpp"

namespace dephase {

inline constexpr int kOutputSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitConvergence = 3, kExitProperty = 4 };

struct RunOptions {
  int jobs = 1;
  bool allow_partial = false;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

// 17 significant digits, '.' decimal, independent of locale.
std::string format_double(double x);

struct CsvTable {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string render() const;
};

struct PointFailure {
  double detuning;
  double coupling;
  std::string reason;
};

struct SweepData {
  std::vector<CsvTable> tables;
  std::vector<PointFailure> failures;
  std::vector<int> cutoffs;  // distinct truncations used, empty for closed-form models
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads; results must be written by index.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

SweepData compute_sweep(const RunConfig& c, int jobs);

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> files;
  std::vector<std::string> messages;
};

RunOutcome run_config(const RunConfig& c, const RunOptions& opt);

struct PropertyCheck {
  std::string name;
  double detuning = 0;
  double coupling = 0;
  double measured = 0;
  double tolerance = 0;
  bool pass = false;
  bool convergence = false;  // failure counts as non-convergence rather than a property violation
};

struct VerifyOutcome {
  int exit_code = kExitOk;
  std::vector<PropertyCheck> checks;
  std::string report;  // JSON
  std::vector<std::string> files;
};

VerifyOutcome verify_config(const RunConfig& c, const RunOptions& opt);

std::string provenance_json(const RunConfig& c, const RunOptions& opt, const SweepData& d);

}  // namespace dephase
