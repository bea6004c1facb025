#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gdlab {

/// CSV writer with deterministic formatting: fixed-point decimals with a
/// '.' separator regardless of locale, LF line endings.
class CsvWriter {
  public:
    explicit CsvWriter(std::string header);

    CsvWriter& field(const std::string& s);
    CsvWriter& field(int64_t v);
    CsvWriter& field(double v, int precision = 6);
    void end_row();

    const std::string& str() const { return out_; }
    void write_file(const std::string& path) const;

  private:
    std::string out_;
    bool row_open_ = false;
};

/// Formats a double as fixed-point text (shared with the writer so every
/// emitted number round-trips identically).
std::string format_fixed(double v, int precision = 6);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
    double number(size_t row, int col) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

}  // namespace gdlab
