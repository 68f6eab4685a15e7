// Copyright 2026 The QAmp Authors.
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
// Text normalization shared by the label catalogs and the question parser.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qamp::text {

struct Token {
  std::string lower;    // ASCII-lowercased surface form
  std::string stem;     // Porter stem of lower
  std::size_t begin;    // byte offsets into the source text
  std::size_t end;
  bool stopword = false;
  bool possessive = false;  // followed by 's or ’s
};

// Splits on word boundaries. A word is a maximal run of ASCII letters,
// digits or non-ASCII code points; the right single quotation mark is
// treated as punctuation.
std::vector<Token> tokenize(std::string_view text);

std::string to_lower_ascii(std::string_view s);

// Porter stemmer, the reference C variant (bli->ble, logi->log). Words that
// are not purely lowercase ASCII letters, or shorter than three characters,
// are returned unchanged.
std::string porter_stem(std::string_view word);

bool is_stopword(std::string_view lower);

// Lowercased tokens joined by single spaces: the form used for exact label
// comparison.
std::string normalize(std::string_view text);

// Character 3-grams of the normalized text, padded with one space on each
// side. Duplicates are kept.
std::vector<std::string> char_trigrams(std::string_view normalized);

// Label derived from a URI when the graph has no explicit one: the local
// name after the last '#', '/' or ':', with '_' turned into spaces, camel
// case split into words, and lowercased.
std::string label_from_uri(std::string_view uri);

}  // namespace qamp::text
