#include "rlf/csv.hpp"

#include "rlf/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace rlf {

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

// One logical record; quoted fields may span physical lines.
std::vector<std::string> split_record(std::string_view text, std::size_t& pos, std::size_t& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    const std::size_t start_line = line;
    while (pos < text.size()) {
        const char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    cur += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                cur += c;
            }
            continue;
        }
        if (c == '"') {
            if (!cur.empty() || was_quoted) {
                throw ParseError("stray quote inside a field", start_line);
            }
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            was_quoted = false;
        } else if (c == '\n') {
            ++line;
            break;
        } else if (c != '\r') {
            if (was_quoted) {
                throw ParseError("text after closing quote", start_line);
            }
            cur += c;
        }
    }
    if (quoted) {
        throw ParseError("unterminated quoted field", start_line);
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_number(const std::string& s, std::size_t line) {
    std::string_view v = s;
    while (!v.empty() && v.front() == ' ') {
        v.remove_prefix(1);
    }
    while (!v.empty() && v.back() == ' ') {
        v.remove_suffix(1);
    }
    if (v == "inf" || v == "+inf") {
        return HUGE_VAL;
    }
    if (v == "-inf") {
        return -HUGE_VAL;
    }
    double x = 0.0;
    const auto* first = v.data();
    if (!v.empty() && v.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
        throw ParseError(fmt::format("'{}' is not a number", s), line);
    }
    return x;
}

}  // namespace

std::size_t CsvTable::column_index(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw InvalidArgument(fmt::format("no column named '{}'", name));
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::column(std::string_view name) const {
    const auto c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(r[c]);
    }
    return out;
}

std::string write_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        out += (i ? "," : "") + quote(table.header[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw InvalidArgument(fmt::format("row has {} cells for {} columns", row.size(), table.header.size()));
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            if (std::isinf(row[i])) {
                out += row[i] > 0 ? "inf" : "-inf";
            } else {
                out += fmt::format("{:.17g}", row[i]);
            }
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    std::size_t pos = 0;
    std::size_t line = 1;
    if (text.empty()) {
        throw ParseError("missing header row", 1);
    }
    t.header = split_record(text, pos, line);
    if (t.header.size() == 1 && t.header.front().empty()) {
        throw ParseError("missing header row", 1);
    }
    while (pos < text.size()) {
        const std::size_t row_line = line;
        auto fields = split_record(text, pos, line);
        if (fields.size() == 1 && fields.front().empty()) {
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw ParseError(fmt::format("expected {} fields, found {}", t.header.size(), fields.size()), row_line);
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            row.push_back(parse_number(f, row_line));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace rlf
