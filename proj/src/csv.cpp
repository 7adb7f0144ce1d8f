#include "sqfd/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "sqfd/errors.hpp"

namespace sqfd {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, int line, std::string_view column) {
    text = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("column '" + std::string(column) + "': not a number: '" + std::string(text) + "'", line);
    return v;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ParseError("missing column '" + std::string(name) + "'", 1);
}

double CsvTable::number(const CsvRow& row, std::string_view name) const {
    return parse_double(row.fields[column(name)], row.line, name);
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty()) continue;
        auto fields = split(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size())
            throw ParseError("expected " + std::to_string(t.header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             number);
        t.rows.push_back({number, std::move(fields)});
    }
    if (t.header.empty()) throw ParseError("empty input: missing header row");
    return t;
}

void write_sweep_csv(std::ostream& out, std::span<const CKPair> points, std::string_view method,
                     std::string_view label) {
    out << "frequency_hz,c_ns_per_m,k_n_per_m,method,structure_label\n";
    for (const auto& p : points)
        out << format_double(p.f) << ',' << format_double(p.c) << ',' << format_double(p.k) << ',' << method << ','
            << label << '\n';
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    const auto t = read_csv(in);
    const auto method = t.column("method");
    const auto label = t.column("structure_label");
    std::vector<SweepRow> out;
    for (const auto& row : t.rows)
        out.push_back({t.number(row, "frequency_hz"), t.number(row, "c_ns_per_m"), t.number(row, "k_n_per_m"),
                       row.fields[method], row.fields[label]});
    return out;
}

} // namespace sqfd
