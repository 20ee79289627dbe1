// Copyright 2026 The commgt Authors
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

#ifndef COMMGT_ERRORS_HPP
#define COMMGT_ERRORS_HPP

#include <stdexcept>

namespace commgt {

// Raised when a probability computation collapses to an all-zero vector.
class NumericDegeneracy : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Raised when an exhaustive enumeration would exceed the supported size.
class SizeLimitError : public std::length_error {
   public:
    using std::length_error::length_error;
};

}  // namespace commgt

#endif
