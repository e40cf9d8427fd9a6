#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace agentsim {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

// Splits on `sep`; no quoting (none of the project's CSVs need it).
std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace agentsim
