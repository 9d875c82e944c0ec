#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rwreset {

/// Shortest text that round-trips: printf %.17g ("inf" for infinity).
std::string format_number(double x);

/// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

using Provenance = std::vector<std::pair<std::string, std::string>>;

/// '#'-prefixed provenance lines, then the header row and the body.
void write_csv(std::ostream& out, const CsvTable& table, const Provenance& provenance);
void write_csv(const std::filesystem::path& path, const CsvTable& table, const Provenance& provenance);

}  // namespace rwreset
