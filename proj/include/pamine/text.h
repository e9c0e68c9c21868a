#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pamine::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
bool is_space(char c);
bool is_alnum(char c);  // ASCII alnum, or any byte of a multi-byte UTF-8 sequence
bool has_alnum(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Reads a newline-delimited list; blank lines and '#' comments are skipped.
std::vector<std::string> read_lines(const std::filesystem::path& path, const std::string& module);

// Same, lowercased into a set.
std::unordered_set<std::string> read_word_set(const std::filesystem::path& path,
                                              const std::string& module);

}  // namespace pamine::text
