#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace sdc {

// Canonical JSON: keys sorted, two-space indentation, floating-point values
// printed with 12 significant digits, non-finite values as null. Equal inputs
// give byte-identical output.
std::string canonical_json(const nlohmann::json& value);

// Number formatting shared by the JSON and CSV writers.
std::string format_number(const nlohmann::json& number);

// Header line plus one line per row; each row is an object keyed by column.
// Missing cells are left empty.
std::string to_csv(const std::vector<std::string>& header, const std::vector<nlohmann::json>& rows);

// Header of the tail-sweep CSV.
const std::vector<std::string>& tail_csv_header();

}  // namespace sdc
