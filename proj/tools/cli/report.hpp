#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace careertrace::cli {

/// "Overseas(CHN,USA)" -> "CHN->USA", "ReturneeResident(CHN,*)" -> "ALL->CHN",
/// "Domestic(CHN)" -> "CHN"; other text is returned unchanged.
std::string flow_label(const std::string& cls);

/// Renders report.md plus SVG charts from the indicator tables found in
/// `in_dir` (pp10.csv, shares.csv, direction.csv, copub.csv, stocks.csv;
/// each optional). Returns the written file names, relative to `out_dir`.
std::vector<std::string> write_report(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir);

}  // namespace careertrace::cli
