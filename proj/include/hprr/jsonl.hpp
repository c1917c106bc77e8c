#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace hprr::io {

/// Calls fn(line_no, line) for each non-blank line. Lines holding a JSON
/// object with a "_header" key are skipped.
void for_each_record_line(const std::string& path,
                          const std::function<void(std::size_t, std::string_view)>& fn);

bool is_header_line(std::string_view line);

/// {"_header": {...}} line written first in tool outputs.
nlohmann::json header_record(std::string_view command, std::uint64_t seed);

/// Writes contents to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

}  // namespace hprr::io
