// Copyright 2026 The iacsmell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace iacsmell::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Splits on '\n'; a trailing '\r' is removed from each line. A final
// newline does not produce an extra empty line.
std::vector<std::string> split_lines(std::string_view content);

// 1-based line access. Throws LocationError when out of range.
std::string line_at(std::string_view content, int line);

// Number of lines as split_lines counts them.
int count_lines(std::string_view content);

bool contains_ci(std::string_view haystack, std::string_view needle);

// True when `word` occurs in `haystack` (case-insensitive) with no
// alphanumeric character on either side.
bool contains_whole_word(std::string_view haystack, std::string_view word);

// Removes one pair of matching outer quotes, if present.
std::string_view strip_quotes(std::string_view s);

// Strip outer whitespace and collapse internal whitespace runs to one space.
std::string normalize_whitespace(std::string_view s);

std::string md5_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace iacsmell::text
