#include "gdlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gdlab {

std::string format_fixed(double v, int precision) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::string header) : out_(std::move(header)) {
    out_ += '\n';
}

CsvWriter& CsvWriter::field(const std::string& s) {
    if (row_open_) out_ += ',';
    out_ += s;
    row_open_ = true;
    return *this;
}

CsvWriter& CsvWriter::field(int64_t v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(double v, int precision) { return field(format_fixed(v, precision)); }

void CsvWriter::end_row() {
    out_ += '\n';
    row_open_ = false;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("csv: cannot open " + path + " for writing");
    f << out_;
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("csv: no column named " + name);
}

double CsvTable::number(size_t row, int col) const {
    const std::string& cell = rows.at(row).at(static_cast<size_t>(col));
    size_t pos = 0;
    double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument("csv: bad number: " + cell);
    return v;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            t.header = cells;
            first = false;
        } else {
            t.rows.push_back(cells);
        }
    }
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

}  // namespace gdlab
