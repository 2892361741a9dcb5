#include "colexforge/csv.hpp"

#include "colexforge/error.hpp"

#include <fstream>
#include <sstream>

namespace colexforge::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t Table::require_column(std::string_view name, std::string_view context) const {
    if (auto index = column(name)) return *index;
    throw Error(ErrorKind::MalformedCsv,
                std::string(context) + ": missing column '" + std::string(name) + "'");
}

Table parse(std::string_view text, std::string_view context) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

    std::vector<Row> records;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // A bare empty line is not a record.
        if (!(row.size() == 1 && row[0].empty())) records.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started || !field.empty()) {
                    throw Error(ErrorKind::MalformedCsv, std::string(context) + ":" + std::to_string(line) +
                                                             ": quote inside unquoted field");
                }
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;
                end_record();
                ++line;
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field.push_back(c);
                break;
        }
    }
    if (in_quotes) {
        throw Error(ErrorKind::MalformedCsv, std::string(context) + ": unterminated quoted field");
    }
    if (field_started || !field.empty() || !row.empty()) end_record();

    Table table;
    if (records.empty()) {
        throw Error(ErrorKind::MalformedCsv, std::string(context) + ": missing header row");
    }
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw Error(ErrorKind::MalformedCsv, std::string(context) + ": record " + std::to_string(r) + " has " +
                                                     std::to_string(records[r].size()) + " fields, expected " +
                                                     std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingFile, path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

std::string escape_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape_field(row[i]);
    }
    out << '\n';
}

std::string to_string(const Table& table) {
    std::ostringstream out;
    write_row(out, table.header);
    for (const auto& row : table.rows) write_row(out, row);
    return out.str();
}

void write_file(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << to_string(table);
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

}  // namespace colexforge::csv
