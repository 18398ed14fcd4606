#include "cmcs/csv.hpp"

#include <fstream>
#include <sstream>

#include "cmcs/errors.hpp"

namespace cmcs {
namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

CsvTable parse(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_line(line);
        if (!header_seen) {
            table.header = std::move(cells);
            header_seen = true;
        } else {
            table.rows.push_back(std::move(cells));
            table.line_numbers.push_back(line_no);
        }
    }
    if (!header_seen) raise(ErrorKind::Schema, "csv: missing header row");
    return table;
}

}  // namespace

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::MissingFile, "cannot open file: " + path);
    return parse(in);
}

CsvTable read_csv_text(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

std::string csv_escape_free_join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

}  // namespace cmcs
