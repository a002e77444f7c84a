#pragma once

#include <string>
#include <vector>

namespace uwqkd::io {

// Six significant digits; scientific (compact exponent, e.g. 1.52300e-8) when
// |x| < 1e-3 or |x| >= 1e7, fixed otherwise with trailing zeros dropped.
std::string format_number(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
};

// RFC-4180 quoting for cells containing ',', '"' or newlines; "\n" line ends.
std::string to_csv(const CsvTable& table);

// Writes the table; throws std::runtime_error naming the path on I/O failure.
void emit_csv(const CsvTable& table, const std::string& path);

}  // namespace uwqkd::io
