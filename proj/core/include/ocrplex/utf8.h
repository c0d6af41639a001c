// Copyright 2026 The Ocrplex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCRPLEX_UTF8_H_
#define OCRPLEX_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace ocrplex {

bool IsValidUtf8(std::string_view text);

// Decodes UTF-8 into code points. Throws ocrplex::Error on ill-formed input.
std::u32string DecodeUtf8(std::string_view text);

std::string EncodeUtf8(std::u32string_view code_points);
void AppendUtf8(char32_t code_point, std::string& out);

// Number of code points; ill-formed sequences count one per maximal subpart.
std::size_t CodePointCount(std::string_view text);

// Unicode general-category predicates.
bool IsWhitespace(char32_t c);
bool IsDecimalDigit(char32_t c);  // Nd
bool IsLetter(char32_t c);        // L*
// Punctuation (P*) or symbol (S*) characters; these are split off token edges.
bool IsPunctuationOrSymbol(char32_t c);

}  // namespace ocrplex

#endif  // OCRPLEX_UTF8_H_
