/* Copyright 2026 The DAGAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DAGAM_FILES_H_
#define DAGAM_FILES_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dagam {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a half-written file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

// Throws LoadError("<file>:<line>: ...") on malformed input.
double parse_double(std::string_view text, const std::filesystem::path& file,
                    std::size_t line);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

// Splits on '\n', dropping a trailing '\r' from each line and a final empty
// line.
std::vector<std::string_view> split_lines(std::string_view text);

std::string sha256_hex(std::string_view bytes);

}  // namespace dagam

#endif  // DAGAM_FILES_H_
