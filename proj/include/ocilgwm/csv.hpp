#pragma once

#include <string>
#include <vector>

namespace ocilgwm {

/// Shortest round-trip decimal form (std::to_chars), so CSV values parse back
/// bit-exactly and reruns of a run emit byte-identical files.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws FormatError listing the expected column.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace ocilgwm
