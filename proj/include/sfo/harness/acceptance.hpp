#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sfo::harness {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0 means no runtime limit
  std::string detail;
};

/// One line: "[PASS] criterion <id> <name>: <detail> (<seconds> s, limit <limit> s)".
std::string format_result(const CriterionResult& r);

// Each criterion writes its CSV outputs into `out_dir`. Outputs contain no
// timing information, so repeated runs produce identical bytes.
CriterionResult criterion_pure_linear(const std::filesystem::path& out_dir);
CriterionResult criterion_sqrt_gap(const std::filesystem::path& out_dir);
CriterionResult criterion_noise_floor(const std::filesystem::path& out_dir);
CriterionResult criterion_hybrid(const std::filesystem::path& out_dir);
CriterionResult criterion_restart(const std::filesystem::path& out_dir);
CriterionResult criterion_prox_oracles(const std::filesystem::path& out_dir);
CriterionResult criterion_recurrences(const std::filesystem::path& out_dir);
CriterionResult criterion_gradient_mapping(const std::filesystem::path& out_dir);

/// Runs criteria 1-8 in order; `on_result` is called after each one.
std::vector<CriterionResult> run_selftest(const std::filesystem::path& out_dir,
                                          void (*on_result)(const CriterionResult&) = nullptr);

struct CompareResult {
  bool identical = false;
  std::size_t files = 0;
  std::vector<std::string> differences;
};

/// Byte comparison of the CSV files of two output directories.
CompareResult compare_outputs(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace sfo::harness
