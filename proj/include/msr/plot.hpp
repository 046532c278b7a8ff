#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace msr {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index, or -1.
  int column(const std::string& name) const;
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

enum class PlotKind { heatmap, threshold_overlay, deviation_scatter };

PlotKind plot_kind_from_string(const std::string& s);

/// Columns each plot kind reads.
std::vector<std::string> required_columns(PlotKind kind);

/// Standalone SVG document. Output depends only on the table contents.
/// heatmap: mean of `success` per (separation, noise) cell, one rect per
/// cell carrying data-value. threshold-overlay: success rate against
/// separation plus a vertical line (data-x) at the mean of `threshold`.
/// deviation-scatter: max_deviation against separation.
std::string plot_svg(const CsvTable& table, PlotKind kind, const std::string& title = "");

void plot_file(const std::filesystem::path& csv, PlotKind kind, const std::filesystem::path& svg);

}  // namespace msr
