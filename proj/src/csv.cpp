#include "epindex/csv.hpp"

#include <fstream>
#include <sstream>

#include "epindex/errors.hpp"

namespace epindex::csv {

std::optional<std::size_t> Table::find(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t Table::require(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw Error(Errc::malformed_row, "missing required column '" + name + "'");
}

std::vector<std::string> split_fields(const std::string& line, std::size_t line_no,
                                      const std::string& origin) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            if (!field.empty())
                throw Error(Errc::malformed_row,
                            origin + ":" + std::to_string(line_no) + ": stray quote");
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted)
        throw Error(Errc::malformed_row,
                    origin + ":" + std::to_string(line_no) + ": unterminated quote");
    fields.push_back(std::move(field));
    return fields;
}

namespace {

Table parse(std::istream& in, const std::string& origin) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_fields(line, line_no, origin);
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size())
                throw Error(Errc::malformed_row,
                            origin + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(table.header.size()) + " fields, got " +
                                std::to_string(fields.size()));
            table.rows.push_back(std::move(fields));
            table.line_numbers.push_back(line_no);
        }
    }
    if (table.header.empty())
        throw Error(Errc::malformed_row, origin + ": missing header row");
    return table;
}

}  // namespace

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    return parse(in, path.filename().string());
}

Table read_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return parse(in, origin);
}

std::vector<std::string> split_list(const std::string& field, char sep) {
    std::vector<std::string> items;
    if (field.empty()) return items;
    std::string item;
    for (char c : field) {
        if (c == sep) {
            if (!item.empty()) items.push_back(std::move(item));
            item.clear();
        } else {
            item += c;
        }
    }
    if (!item.empty()) items.push_back(std::move(item));
    return items;
}

std::string quote(const std::string& field) {
    bool needs = field.find(',') != std::string::npos ||
                 field.find('"') != std::string::npos ||
                 (!field.empty() && field.front() == '#');
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace epindex::csv
