#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace epindex::csv {

// Parsed CSV with a required header row. Lines starting with '#' and blank
// lines are skipped. Fields may be double-quoted (RFC-4180 style, "" escapes
// a quote); multiline fields are not supported.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row

    // Index of a named column, or nullopt.
    std::optional<std::size_t> find(const std::string& name) const;
    // Same but throws Errc::malformed_row when the column is absent.
    std::size_t require(const std::string& name) const;
};

Table read_file(const std::filesystem::path& path);
Table read_string(const std::string& text, const std::string& origin = "<string>");

std::vector<std::string> split_fields(const std::string& line, std::size_t line_no,
                                      const std::string& origin);

// Semicolon-separated sub-list inside one field; empty field -> empty list.
std::vector<std::string> split_list(const std::string& field, char sep = ';');

// Quotes a field when it contains a comma, quote, or leading '#'.
std::string quote(const std::string& field);

}  // namespace epindex::csv
