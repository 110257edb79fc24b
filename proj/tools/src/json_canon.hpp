#pragma once

#include <json.hpp>

#include <string>

namespace polarcone_cli {

/// Canonical report serialization: insertion-ordered keys, two-space
/// indent, doubles printed with 17 significant digits so values round-trip
/// and equal configs produce byte-identical documents.
std::string dump_canonical(const nlohmann::ordered_json& doc);

/// One double in the canonical format (shared with the CSV writer).
std::string format_double(double v);

}  // namespace polarcone_cli
