// Copyright 2026 The fibrecnot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fibrecnot {

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Parses `key = value` lines. Blank lines and `#` comments are skipped; duplicate keys and
/// lines without '=' raise ParseError.
std::vector<KeyValue> parse_key_values(std::string_view text);

/// Strict numeric conversion; the whole value must parse. Throws ParseError at `line`.
double parse_double(std::string_view text, std::size_t line = 0);
long long parse_integer(std::string_view text, std::size_t line = 0);

/// Shortest decimal that round-trips a double.
std::string format_double(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace fibrecnot
