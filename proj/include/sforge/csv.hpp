#pragma once

#include <string>
#include <vector>

namespace sforge {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

// Plain comma-separated values, no quoting. Throws ParseError on an
// empty file or ragged rows, IoError when the file cannot be opened.
CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

// Stable float formatting for reproducible files.
std::string fmt_g17(double v); // round-trip exact
std::string fmt_g10(double v); // report tables
std::string fmt_f4(double v);  // human-readable tables

double parse_double(const std::string& s); // ParseError on garbage
long parse_long(const std::string& s);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& line, char sep);

} // namespace sforge
