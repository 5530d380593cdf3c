#pragma once

#include <filesystem>
#include <string>

namespace regrepair {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Recursive copy; destination must be empty or absent.
void copy_tree(const std::filesystem::path& from, const std::filesystem::path& to);

bool dir_empty_or_absent(const std::filesystem::path& path);

}  // namespace regrepair
