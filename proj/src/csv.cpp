#include "uwqkd/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace uwqkd::io {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";

    char buf[64];
    const double ax = std::abs(x);
    if (ax < 1e-3 || ax >= 1e7) {
        std::snprintf(buf, sizeof buf, "%.5e", x);
        std::string s(buf);
        const auto e = s.find('e');
        std::string mant = s.substr(0, e);
        std::string exp = s.substr(e + 1);
        const bool neg = exp[0] == '-';
        std::size_t i = (exp[0] == '-' || exp[0] == '+') ? 1 : 0;
        while (i + 1 < exp.size() && exp[i] == '0') ++i;
        return mant + "e" + (neg ? "-" : "") + exp.substr(i);
    }

    const int magnitude = static_cast<int>(std::floor(std::log10(ax)));
    const int decimals = std::max(0, 5 - magnitude);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return s;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size()) throw std::invalid_argument("CSV row width does not match header");
    rows.push_back(std::move(cells));
}

namespace {

std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += quote(cells[i]);
    }
    out += '\n';
}

}  // namespace

std::string to_csv(const CsvTable& table) {
    std::string out;
    append_line(out, table.header);
    for (const auto& row : table.rows) append_line(out, row);
    return out;
}

void emit_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_csv(table);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace uwqkd::io
