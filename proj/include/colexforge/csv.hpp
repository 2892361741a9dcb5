#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colexforge::csv {

using Row = std::vector<std::string>;

/// A parsed CSV file: one header row plus data rows of equal width.
struct Table {
    Row header;
    std::vector<Row> rows;

    /// Index of a header column, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;
    /// Index of a header column; throws MalformedCsv naming `context` if absent.
    std::size_t require_column(std::string_view name, std::string_view context) const;
};

/// RFC-4180 parse. Accepts LF or CRLF line endings and a UTF-8 BOM.
Table parse(std::string_view text, std::string_view context = "<memory>");
Table read_file(const std::filesystem::path& path);

std::string escape_field(std::string_view field);
void write_row(std::ostream& out, const Row& row);
std::string to_string(const Table& table);
void write_file(const std::filesystem::path& path, const Table& table);

}  // namespace colexforge::csv
