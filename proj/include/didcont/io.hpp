#pragma once

#include "didcont/model.hpp"

#include <iosfwd>
#include <string>

namespace didcont {

//! Parses comma-separated values with a required header row. Empty fields,
//! "nan" and "inf" parse to non-finite values so validation can name them.
Table parse_csv(std::istream& in);
Table read_csv(const std::string& path);

//! Writes a header row and values at 17 significant digits.
void write_csv(std::ostream& out, const Table& table);
void write_csv_file(const std::string& path, const Table& table);

//! Shortest round-trip-safe text for a double (17 significant digits).
std::string format_real(double value);

} // namespace didcont
