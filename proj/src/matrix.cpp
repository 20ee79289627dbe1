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

#include "commgt/matrix.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace commgt {

TestMatrix::TestMatrix(std::size_t width, std::vector<Row> rows) : width_(width) {
    rows_.reserve(rows.size());
    for (auto& r : rows) add_row(std::move(r));
}

void TestMatrix::add_row(Row support) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (!support.empty() && support.back() >= width_)
        throw std::invalid_argument("row index " + std::to_string(support.back()) + " outside width " +
                                    std::to_string(width_));
    rows_.push_back(std::move(support));
}

std::vector<std::vector<std::uint32_t>> TestMatrix::column_supports() const {
    std::vector<std::vector<std::uint32_t>> cols(width_);
    for (std::size_t t = 0; t < rows_.size(); ++t)
        for (std::uint32_t i : rows_[t]) cols[i].push_back(static_cast<std::uint32_t>(t));
    return cols;
}

std::vector<std::size_t> TestMatrix::column_weights() const {
    std::vector<std::size_t> w(width_, 0);
    for (const auto& r : rows_)
        for (std::uint32_t i : r) ++w[i];
    return w;
}

std::size_t TestMatrix::nonzeros() const {
    std::size_t nz = 0;
    for (const auto& r : rows_) nz += r.size();
    return nz;
}

void write_matrix(std::ostream& out, const TestMatrix& matrix) {
    out << matrix.tests() << ' ' << matrix.width() << '\n';
    for (const auto& r : matrix.rows()) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) out << ' ';
            out << r[k];
        }
        out << '\n';
    }
}

TestMatrix read_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("matrix file is empty");
    std::istringstream header(line);
    long long tests = -1, width = -1;
    if (!(header >> tests >> width) || tests < 0 || width < 0)
        throw std::invalid_argument("matrix header must be 'T n'");
    TestMatrix matrix(static_cast<std::size_t>(width));
    for (long long t = 0; t < tests; ++t) {
        if (!std::getline(in, line)) throw std::invalid_argument("matrix file has fewer rows than its header");
        std::istringstream fields(line);
        Row row;
        long long idx;
        while (fields >> idx) {
            if (idx < 0) throw std::invalid_argument("negative member index in matrix file");
            row.push_back(static_cast<std::uint32_t>(idx));
        }
        if (!fields.eof()) throw std::invalid_argument("malformed matrix row " + std::to_string(t));
        matrix.add_row(std::move(row));
    }
    return matrix;
}

std::string format_matrix(const TestMatrix& matrix) {
    std::ostringstream out;
    write_matrix(out, matrix);
    return out.str();
}

TestMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    return read_matrix(in);
}

}  // namespace commgt
