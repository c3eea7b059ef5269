#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace memkernel::cli {

/// One row of a convergence table; observed_order is empty on the first row.
struct ConvergenceRow {
  int grid = 0;
  double residual = 0;
  std::string observed_order;
};

/// log2(coarse/fine) when both exceed 100 machine epsilon, "exact" otherwise.
std::string observed_order(double coarse, double fine);
std::vector<ConvergenceRow> convergence_table(const std::vector<int>& grids, const std::vector<double>& residuals);

struct CsvFile {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json convergence = nlohmann::json::object();
  std::vector<std::string> failures;
  std::vector<CsvFile> csv;

  /// Records a bounded check; a violated bound becomes a failure.
  void check(const std::string& name, double value, double bound);
  void add_table(const std::string& name, const std::vector<ConvergenceRow>& rows);
  bool passed() const { return failures.empty(); }
  nlohmann::json to_json(const RunConfig* cfg) const;
  void write(const std::string& dir, const RunConfig* cfg) const;
};

Report cmd_check_identities(const RunConfig& cfg);
Report cmd_shape_residual(const RunConfig& cfg);
Report cmd_stress(const RunConfig& cfg);
Report cmd_variation(const RunConfig& cfg);
Report cmd_catalog();

/// Parses argv, runs the command and writes the report. Returns 0 pass, 1 bound failure, 2 config error.
int run(int argc, char** argv);

}  // namespace memkernel::cli
