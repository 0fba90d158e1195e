#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "calabi/report.hpp"

namespace calabi::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNonConvergence = 2, kVerificationFailed = 3 };

struct RunConfig {
  std::string command;
  int m = 1;
  std::optional<int> p, k;
  std::optional<double> kappa, c, mu, q, sigma0, s_min, s_max;
  int samples = 4001;
  double tol = 1e-8;
  std::string suite = "all";
  std::string out;
  std::string from_report;
};

struct RunResult {
  int exit_code = kOk;
  json report;
  std::vector<std::pair<std::string, std::string>> files;  // file name, contents
  std::string diagnostic;
};

json config_json(const RunConfig& cfg);
RunConfig config_from_json(const json& j);

/// Runs the pipeline for cfg.command without touching the file system.
RunResult execute(const RunConfig& cfg);

/// execute() plus writing report.json and the CSV files into cfg.out.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and calls run().
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace calabi::cli
