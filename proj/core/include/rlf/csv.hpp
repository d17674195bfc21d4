#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rlf {

/// Numeric table with a mandatory header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header name; throws InvalidArgument when absent.
    [[nodiscard]] std::size_t column_index(std::string_view name) const;
    [[nodiscard]] std::vector<double> column(std::string_view name) const;
};

/// Header fields are quoted when they contain ',', '"' or a newline. Numbers use %.17g.
std::string write_csv(const CsvTable& table);

/// Throws ParseError (with line) on ragged rows, bad numbers or a missing header.
CsvTable parse_csv(std::string_view text);

}  // namespace rlf
