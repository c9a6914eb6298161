#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace modlab::io {

/// Writes via a sibling temp file and rename; creates parent directories.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

/// Parses each non-blank line and hands it to `row`. Any failure becomes a
/// ValidationError "path:line: message".
void read_jsonl(const std::filesystem::path& path, const std::function<void(const nlohmann::json&)>& row);

std::string read_text(const std::filesystem::path& path);

}  // namespace modlab::io
