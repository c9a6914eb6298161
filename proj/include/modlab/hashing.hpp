#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace modlab {

/// Lowercase hex SHA-256 of `data` (64 characters).
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's bytes. Throws modlab::Error if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// 64-bit FNV-1a, used for seeding deterministic generators.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace modlab
