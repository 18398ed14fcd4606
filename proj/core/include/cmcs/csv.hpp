#pragma once

#include <string>
#include <vector>

namespace cmcs {

// Minimal comma-separated table: header row plus string cells. Lines starting
// with '#' (run manifests on output files) and blank lines are skipped on read.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based file line of each row, for row-level error messages.
    std::vector<std::size_t> line_numbers;
};

CsvTable read_csv_file(const std::string& path);
CsvTable read_csv_text(const std::string& text);

std::string csv_escape_free_join(const std::vector<std::string>& cells);

}  // namespace cmcs
