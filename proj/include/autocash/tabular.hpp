// Copyright 2026 The autocash Authors.
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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace autocash {

enum class AttributeKind { numeric, categorical };

struct Missing {
    bool operator==(const Missing&) const = default;
};

/// One cell viewed in isolation: a number, a category token, or missing.
using Cell = std::variant<Missing, double, std::string>;

/// A typed column. Numeric columns store values in `numbers` (NaN marks a
/// missing cell); categorical columns store indices into `levels` in `codes`
/// (-1 marks a missing cell). Levels are kept in lexicographic token order,
/// which is also the class order used for tie-breaking everywhere.
struct Column {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<double> numbers;
    std::vector<std::int32_t> codes;
    std::vector<std::string> levels;

    bool is_missing(std::size_t row) const;
    std::size_t missing_count() const;
};

/// Immutable labelled table. The target is always a categorical column.
class Dataset {
public:
    /// Validates the invariants (equal column lengths, categorical target in
    /// range, codes inside their level lists) and throws DataError otherwise.
    Dataset(std::string name, std::vector<Column> columns, std::size_t target_index);

    const std::string& name() const { return name_; }
    std::size_t row_count() const { return rows_; }
    std::size_t column_count() const { return columns_.size(); }
    std::size_t target_index() const { return target_; }
    const Column& column(std::size_t c) const { return columns_.at(c); }
    const std::vector<Column>& columns() const { return columns_; }
    const Column& target() const { return columns_[target_]; }

    /// Number of target levels (classes), including ones absent from this view.
    std::size_t class_count() const { return target().levels.size(); }
    /// Target class index of every row. Requires no missing target cells.
    std::vector<int> labels() const;

    Cell cell(std::size_t row, std::size_t col) const;
    bool has_missing() const;

    /// Rows in the given order; level lists are shared with the parent so
    /// codes stay comparable between subsets.
    Dataset subset(std::span<const std::size_t> rows) const;
    Dataset renamed(std::string name) const;

    bool operator==(const Dataset& other) const;

private:
    std::string name_;
    std::vector<Column> columns_;
    std::size_t target_ = 0;
    std::size_t rows_ = 0;
};

struct CsvOptions {
    char delimiter = ',';
    std::string missing_token = "?";
};

/// Column to use as the target: a header name, or a zero-based index.
using TargetSpec = std::variant<std::string, std::size_t>;

/// Index value selecting the rightmost column.
inline constexpr std::size_t kLastColumn = static_cast<std::size_t>(-1);

/// Parses a target argument: a header name wins over an index reading.
TargetSpec parse_target(const std::string& text);

/// Loads a CSV file with a header row. A non-target column is numeric iff
/// every non-missing cell is an integer or decimal literal; the target is
/// always categorical. Missing cells are the missing token or empty.
Dataset load_csv(const std::filesystem::path& path, const TargetSpec& target,
                 const CsvOptions& options = {});

/// Same, reading from an in-memory buffer (name is used as the dataset name).
Dataset parse_csv(const std::string& text, const std::string& name, const TargetSpec& target,
                  const CsvOptions& options = {});

/// Writes the dataset back as CSV; numbers use the shortest round-trip form.
void write_csv(const Dataset& d, const std::filesystem::path& path, const CsvOptions& options = {});
std::string to_csv(const Dataset& d, const CsvOptions& options = {});

/// Replaces each missing cell with a seeded uniform draw from the non-missing
/// cells of the same column. Throws DataError naming a column with no donors.
Dataset impute_missing(const Dataset& d, std::uint64_t seed);

/// Stratified split: each class contributes round(train_fraction * count)
/// rows to the train part (at least one when the class has two or more rows,
/// and singletons go to train). Both parts keep the original row order.
std::pair<Dataset, Dataset> split_stratified(const Dataset& d, double train_fraction,
                                             std::uint64_t seed);

/// The row indices chosen for the train and test parts by split_stratified.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_indices(
    const Dataset& d, double train_fraction, std::uint64_t seed);

}  // namespace autocash
