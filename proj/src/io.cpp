#include "didcont/io.hpp"
#include "didcont/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace didcont {

namespace {

std::vector<std::string> split_line(const std::string& line)
{
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ','))
    fields.push_back(field);
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_field(const std::string& raw, std::size_t line_no)
{
  const std::string f = trim(raw);
  if (f.empty() || f == "NA" || f == "nan" || f == "NaN")
    return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size())
    throw InputError("line " + std::to_string(line_no) + ": not a number '" + f + "'");
  return v;
}

} // namespace

Table parse_csv(std::istream& in)
{
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line))
    throw InputError("empty CSV input");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0)
    line.erase(0, 3);
  Table table;
  for (const auto& name : split_line(line)) {
    const std::string n = trim(name);
    if (n.empty())
      throw InputError("empty column name in header");
    table.add(n, {});
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_line(line);
    if (fields.size() != table.names.size())
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.names.size()) + " fields, got " +
                       std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c)
      table.columns[c].push_back(parse_field(fields[c], line_no));
  }
  return table;
}

Table read_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  return parse_csv(in);
}

std::string format_real(double value)
{
  char buf[64];
  const auto [ptr, ec] =
    std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Table& table)
{
  for (std::size_t c = 0; c < table.names.size(); ++c)
    out << (c ? "," : "") << table.names[c];
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? "," : "") << format_real(table.columns[c][r]);
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const Table& table)
{
  std::ofstream out(path);
  if (!out)
    throw InputError("cannot write '" + path + "'");
  write_csv(out, table);
}

} // namespace didcont
