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

#ifndef OCRPLEX_ERROR_H_
#define OCRPLEX_ERROR_H_

#include <stdexcept>
#include <string>

namespace ocrplex {

// Raised for invalid data or violated preconditions (malformed files,
// non-stochastic matrices, empty subsets, ...). The command-line tool maps it
// to exit status 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ocrplex

#endif  // OCRPLEX_ERROR_H_
