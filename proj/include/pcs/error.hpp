// Copyright 2026 The PCS Authors
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

#ifndef PCS_ERROR_HPP_
#define PCS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pcs {

// Failure categories. The CLI maps each one to a stable exit code.
enum class ErrorKind {
  kParse,       // malformed input text
  kValidation,  // input parsed but violates a precondition
  kCap,         // enumeration budget exceeded
  kDegenerate,  // numerically degenerate configuration
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pcs

#endif  // PCS_ERROR_HPP_
