#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "poswise/experiment.hpp"

namespace poswise::report {

/// `epoch,loss_gd,loss_pw`, one row per epoch up to the longer run; a run that
/// stopped early (or was not requested) leaves its cells empty. Numbers use the
/// shortest representation that round-trips.
std::string format_csv(const ExperimentReport& report);

struct CsvColumns {
  std::vector<std::optional<double>> gd;
  std::vector<std::optional<double>> pw;
};
CsvColumns parse_csv(const std::string& text);

std::string format_json(const ExperimentReport& report);

/// Standalone SVG line chart of loss against epoch with the threshold drawn
/// as a dashed horizontal rule.
std::string format_svg(const ExperimentReport& report);

struct OutputFiles {
  std::filesystem::path csv;
  std::filesystem::path json;
  std::filesystem::path svg;
};

/// Writes losses.csv, report.json and losses.svg into `dir`, creating it if needed.
OutputFiles write_all(const ExperimentReport& report, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace poswise::report
