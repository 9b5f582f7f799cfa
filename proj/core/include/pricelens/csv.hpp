/*
 * Copyright 2026 The Pricelens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRICELENS_CSV_HPP_
#define PRICELENS_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace pricelens::csv {

using Row = std::vector<std::string>;

// RFC 4180: comma separated, double-quote escaping, quoted fields may span
// lines. A trailing newline does not produce an empty record.
std::vector<Row> parse(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);
std::string format_row(const Row& row);

// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

}  // namespace pricelens::csv

#endif  // PRICELENS_CSV_HPP_
