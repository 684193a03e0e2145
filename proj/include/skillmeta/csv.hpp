#pragma once

#include <optional>
#include <string>
#include <vector>

namespace skillmeta {

/// A delimited text table held as raw cells. Header row is mandatory.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or nullopt if absent.
    std::optional<std::size_t> find_column(const std::string& name) const;
};

CsvTable read_delimited(const std::string& path, char delim = ',');

std::string format_delimited(const CsvTable& table, char delim = ',');

/// Writes content to `path` via a temporary file and rename, so a failed
/// run never leaves a partial file at the destination.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace skillmeta
