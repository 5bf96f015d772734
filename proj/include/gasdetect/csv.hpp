#pragma once

// Node->sink wire record: CSV `node_id,t,value` with a header line.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "gasdetect/model.hpp"

namespace gasdetect {

// Throws DataError naming the source and 1-based line number of the first bad record.
std::vector<Sample> read_samples_csv(std::istream& in, std::string_view source = "<input>");
std::vector<Sample> read_samples_csv(const std::filesystem::path& path);

// Values are written in shortest round-trip form, so a written log reads back
// bit-identical.
void write_samples_csv(std::ostream& out, std::span<const Sample> samples, bool header = true);

// One number per line; a non-numeric first line is taken as a header.
std::vector<double> read_column_csv(std::istream& in, std::string_view source = "<input>");
std::vector<double> read_column_csv(const std::filesystem::path& path);

}  // namespace gasdetect
