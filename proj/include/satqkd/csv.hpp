#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace satqkd {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace csv {

/// 17 significant digits: enough for the decimal text to round-trip back to
/// the identical double.
std::string format_double(double value);

/// Splits one line on commas. No quoting; emitted files are purely numeric
/// or enum-coded.
std::vector<std::string> split_line(const std::string& line);

double parse_double(const std::string& field);

/// Reads a CSV file back as header + rows, for round-trip checks and the
/// plot emitters.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read_file(const std::filesystem::path& path);

/// Writes full file contents, throwing io_error on any stream failure.
void write_text_file(const std::filesystem::path& path, const std::string& body);

} // namespace csv
} // namespace satqkd
