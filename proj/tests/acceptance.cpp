#include "sfo/harness/acceptance.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

using namespace sfo::harness;

namespace {

void print(const CriterionResult& r) {
  std::printf("%s\n", format_result(r).c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path root = argc > 1 ? argv[1] : "acceptance_out";
  const auto dir_a = root / "run_a";
  const auto dir_b = root / "run_b";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);

  bool ok = true;
  for (const auto& r : run_selftest(dir_a, print)) ok = ok && r.pass;

  const auto start = std::chrono::steady_clock::now();
  const std::string cmd =
      fmt::format("\"{}\" selftest --out \"{}\" > \"{}\" 2>&1", SFO_CLI_PATH, dir_b.string(),
                  (root / "cli_selftest.log").string());
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  const auto cmp = compare_outputs(dir_a, dir_b);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  CriterionResult det;
  det.id = 9;
  det.name = "determinism";
  det.pass = (code == 0 || code == 1) && cmp.identical && cmp.files > 0;
  det.seconds = secs;
  det.detail = fmt::format("CLI selftest exit code {}; {} CSV files {}", code, cmp.files,
                           cmp.identical ? "byte-identical across the two runs" : "differ");
  for (const auto& d : cmp.differences) det.detail += "; " + d;
  print(det);
  ok = ok && det.pass;

  std::printf("%s\n", ok ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
  return ok ? 0 : 1;
}
