#include "rwreset/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace rwreset {

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::logic_error("CSV row width does not match the header");
    rows.push_back(std::move(row));
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table, const Provenance& provenance) {
    for (const auto& [key, value] : provenance) {
        std::string v = value;
        for (char& c : v) {
            if (c == '\n' || c == '\r') c = ' ';
        }
        out << "# " << key << ": " << v << '\n';
    }
    write_line(out, table.header);
    for (const auto& row : table.rows) write_line(out, row);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table, const Provenance& provenance) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(out, table, provenance);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace rwreset
