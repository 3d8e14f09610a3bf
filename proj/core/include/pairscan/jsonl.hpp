#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace pairscan {

using Json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it into place; parent
/// directories are created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// One JSON value per non-blank line. Parse errors name the line number.
std::vector<Json> read_jsonl(const std::filesystem::path& path);
std::vector<Json> parse_jsonl(std::string_view text, std::string_view origin = "<memory>");

std::string to_jsonl(const std::vector<Json>& rows);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

}  // namespace pairscan
