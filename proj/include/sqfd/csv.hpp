#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqfd/reynolds.hpp"

namespace sqfd {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Strict number parsing; throws ParseError naming the line and column.
double parse_double(std::string_view text, int line, std::string_view column);

struct CsvRow {
    int line = 0; // 1-based line in the source
    std::vector<std::string> fields;
};

/// Comma-separated table with a header row. Blank lines are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    /// Column index; throws ParseError when the header lacks it.
    std::size_t column(std::string_view name) const;
    double number(const CsvRow& row, std::string_view name) const;
};

/// Throws ParseError on a missing header or a row with the wrong field count.
CsvTable read_csv(std::istream& in);

struct SweepRow {
    double frequency_hz = 0.0;
    double c = 0.0;
    double k = 0.0;
    std::string method;
    std::string label;
};

/// frequency_hz,c_ns_per_m,k_n_per_m,method,structure_label
void write_sweep_csv(std::ostream& out, std::span<const CKPair> points, std::string_view method,
                     std::string_view label);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

} // namespace sqfd
