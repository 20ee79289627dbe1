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

#ifndef COMMGT_MATRIX_HPP
#define COMMGT_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace commgt {

using Row = std::vector<std::uint32_t>;

// Sparse binary pooling design: each row is the sorted support of one test.
class TestMatrix {
   public:
    TestMatrix() = default;
    explicit TestMatrix(std::size_t width) : width_(width) {}
    TestMatrix(std::size_t width, std::vector<Row> rows);

    std::size_t tests() const { return rows_.size(); }
    std::size_t width() const { return width_; }
    const Row& row(std::size_t t) const { return rows_.at(t); }
    const std::vector<Row>& rows() const { return rows_; }
    void add_row(Row support);

    // For each column, the ascending list of tests containing it.
    std::vector<std::vector<std::uint32_t>> column_supports() const;
    std::vector<std::size_t> column_weights() const;
    std::size_t nonzeros() const;

    friend bool operator==(const TestMatrix&, const TestMatrix&) = default;

   private:
    std::size_t width_ = 0;
    std::vector<Row> rows_;
};

// Text format: a header line "T n", then one line per test with its member
// indices separated by spaces.
void write_matrix(std::ostream& out, const TestMatrix& matrix);
TestMatrix read_matrix(std::istream& in);
std::string format_matrix(const TestMatrix& matrix);
TestMatrix parse_matrix(const std::string& text);

}  // namespace commgt

#endif
