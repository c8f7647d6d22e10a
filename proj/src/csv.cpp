#include "ocilgwm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ocilgwm/errors.hpp"

namespace ocilgwm {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  std::string have;
  for (const auto& h : header) have += (have.empty() ? "" : ",") + h;
  throw FormatError("missing CSV column \"" + name + "\" (file has: " + have + ")");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw FormatError(path + ": empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split_line(line);
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    t.rows.push_back(split_line(line));
  }
  return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
    f << '\n';
  }
}

}  // namespace ocilgwm
