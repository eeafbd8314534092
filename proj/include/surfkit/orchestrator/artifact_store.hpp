#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace surfkit::orchestrator {

std::string sha256_hex(std::string_view bytes);

/// Whole file as bytes. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary, flushes it to disk and renames it over
/// `path`. Readers see either the old or the new content.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

/// Reads `path` and checks its digest. If the digest differs but
/// `path.pending` carries the expected content (a commit whose rename has
/// not happened yet), that content is returned instead.
/// Throws IntegrityError, IoError.
std::string read_verified(const std::filesystem::path& path, const std::string& sha256);

std::filesystem::path pending_path(const std::filesystem::path& path);

}  // namespace surfkit::orchestrator
