#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gosim {

std::string sha256_hex(std::string_view data);
// Throws Error(Io) when the file cannot be read.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace gosim
