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

#include "autocash/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "autocash/errors.hpp"
#include "autocash/random.hpp"

namespace autocash {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Row = std::vector<std::string>;

struct Field {
    std::string text;
    bool quoted = false;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

// RFC-4180 records: quoted fields may contain delimiters, doubled quotes and
// line breaks. Unquoted fields are trimmed of surrounding blanks. Blank lines
// are skipped.
std::vector<std::vector<Field>> parse_records(const std::string& text, char delim,
                                              const std::string& source) {
    std::vector<std::vector<Field>> records;
    std::vector<Field> record;
    std::string field;
    bool quoted = false;
    bool in_quotes = false;
    bool record_has_content = false;
    std::size_t line = 1;

    auto end_field = [&] {
        record.push_back({quoted ? field : trim(field), quoted});
        field.clear();
        quoted = false;
    };
    auto end_record = [&] {
        end_field();
        if (record_has_content || record.size() > 1 || !record.front().text.empty() ||
            record.front().quoted) {
            records.push_back(std::move(record));
        }
        record.clear();
        record_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && trim(field).empty()) {
            field.clear();
            in_quotes = true;
            quoted = true;
            record_has_content = true;
        } else if (c == delim) {
            end_field();
            record_has_content = true;
        } else if (c == '\r') {
            // CRLF handled at '\n'.
        } else if (c == '\n') {
            end_record();
            ++line;
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw DataError(source + ": unterminated quoted field near line " + std::to_string(line));
    }
    if (!field.empty() || !record.empty() || quoted) end_record();
    return records;
}

bool is_decimal_literal(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t int_digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        ++i;
        ++int_digits;
    }
    std::size_t frac_digits = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            ++i;
            ++frac_digits;
        }
    }
    return i == s.size() && int_digits + frac_digits > 0;
}

std::optional<double> parse_number(std::string_view s) {
    if (!is_decimal_literal(s)) return std::nullopt;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string out(buf, ptr);
    // Exponent notation would not reload as numeric.
    if (out.find_first_of("eE") != std::string::npos) {
        std::ostringstream os;
        os.precision(17);
        os << std::fixed << v;
        out = os.str();
        if (out.find('.') != std::string::npos) {
            while (out.back() == '0') out.pop_back();
            if (out.back() == '.') out.pop_back();
        }
    }
    return out;
}

std::string quote_if_needed(const std::string& s, char delim) {
    const bool needs = s.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string::npos ||
                       s.empty() || s.front() == ' ' || s.back() == ' ';
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

Column build_column(std::string name, const std::vector<std::vector<Field>>& records,
                    std::size_t col, bool force_categorical, const CsvOptions& options) {
    const std::size_t n = records.size() - 1;
    auto missing = [&](const Field& f) {
        return !f.quoted && (f.text.empty() || f.text == options.missing_token);
    };

    bool numeric = !force_categorical;
    if (numeric) {
        for (std::size_t r = 1; r <= n && numeric; ++r) {
            const Field& f = records[r][col];
            if (!missing(f) && !parse_number(f.text)) numeric = false;
        }
    }

    Column c;
    c.name = std::move(name);
    if (numeric) {
        c.kind = AttributeKind::numeric;
        c.numbers.reserve(n);
        for (std::size_t r = 1; r <= n; ++r) {
            const Field& f = records[r][col];
            c.numbers.push_back(missing(f) ? kNaN : *parse_number(f.text));
        }
        return c;
    }

    c.kind = AttributeKind::categorical;
    std::map<std::string, std::int32_t> index;
    for (std::size_t r = 1; r <= n; ++r) {
        const Field& f = records[r][col];
        if (!missing(f)) index.emplace(f.text, 0);
    }
    for (auto& [token, code] : index) {
        code = static_cast<std::int32_t>(c.levels.size());
        c.levels.push_back(token);
    }
    c.codes.reserve(n);
    for (std::size_t r = 1; r <= n; ++r) {
        const Field& f = records[r][col];
        c.codes.push_back(missing(f) ? -1 : index.at(f.text));
    }
    return c;
}

bool same_number(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

bool Column::is_missing(std::size_t row) const {
    return kind == AttributeKind::numeric ? std::isnan(numbers[row]) : codes[row] < 0;
}

std::size_t Column::missing_count() const {
    std::size_t count = 0;
    const std::size_t n = kind == AttributeKind::numeric ? numbers.size() : codes.size();
    for (std::size_t r = 0; r < n; ++r) count += is_missing(r) ? 1 : 0;
    return count;
}

Dataset::Dataset(std::string name, std::vector<Column> columns, std::size_t target_index)
    : name_(std::move(name)), columns_(std::move(columns)), target_(target_index) {
    if (columns_.empty()) throw DataError(name_ + ": dataset has no columns");
    if (target_ >= columns_.size()) {
        throw DataError(name_ + ": target index " + std::to_string(target_) + " out of range");
    }
    if (columns_[target_].kind != AttributeKind::categorical) {
        throw DataError(name_ + ": target column '" + columns_[target_].name +
                        "' must be categorical");
    }
    auto length = [](const Column& c) {
        return c.kind == AttributeKind::numeric ? c.numbers.size() : c.codes.size();
    };
    rows_ = length(columns_.front());
    for (const Column& c : columns_) {
        if (length(c) != rows_) {
            throw DataError(name_ + ": column '" + c.name + "' has " + std::to_string(length(c)) +
                            " cells, expected " + std::to_string(rows_));
        }
        if (c.kind == AttributeKind::categorical) {
            const auto levels = static_cast<std::int32_t>(c.levels.size());
            for (auto code : c.codes) {
                if (code < -1 || code >= levels) {
                    throw DataError(name_ + ": column '" + c.name + "' has an invalid level code");
                }
            }
        }
    }
}

std::vector<int> Dataset::labels() const {
    const Column& t = target();
    std::vector<int> out(t.codes.begin(), t.codes.end());
    if (std::any_of(out.begin(), out.end(), [](int v) { return v < 0; })) {
        throw DataError(name_ + ": target column has missing cells; impute first");
    }
    return out;
}

Cell Dataset::cell(std::size_t row, std::size_t col) const {
    const Column& c = columns_.at(col);
    if (row >= rows_) throw ContractError("row index out of range");
    if (c.is_missing(row)) return Missing{};
    if (c.kind == AttributeKind::numeric) return c.numbers[row];
    return c.levels[static_cast<std::size_t>(c.codes[row])];
}

bool Dataset::has_missing() const {
    return std::any_of(columns_.begin(), columns_.end(),
                       [](const Column& c) { return c.missing_count() > 0; });
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const Column& c : columns_) {
        Column s;
        s.name = c.name;
        s.kind = c.kind;
        s.levels = c.levels;
        if (c.kind == AttributeKind::numeric) {
            s.numbers.reserve(rows.size());
            for (auto r : rows) s.numbers.push_back(c.numbers.at(r));
        } else {
            s.codes.reserve(rows.size());
            for (auto r : rows) s.codes.push_back(c.codes.at(r));
        }
        cols.push_back(std::move(s));
    }
    return Dataset(name_, std::move(cols), target_);
}

Dataset Dataset::renamed(std::string name) const {
    Dataset copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

bool Dataset::operator==(const Dataset& other) const {
    if (name_ != other.name_ || target_ != other.target_ || rows_ != other.rows_ ||
        columns_.size() != other.columns_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        const Column& a = columns_[i];
        const Column& b = other.columns_[i];
        if (a.name != b.name || a.kind != b.kind || a.levels != b.levels || a.codes != b.codes) {
            return false;
        }
        if (!std::equal(a.numbers.begin(), a.numbers.end(), b.numbers.begin(), b.numbers.end(),
                        same_number)) {
            return false;
        }
    }
    return true;
}

TargetSpec parse_target(const std::string& text) {
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) {
            return c >= '0' && c <= '9';
        })) {
        return static_cast<std::size_t>(std::stoull(text));
    }
    return text;
}

Dataset parse_csv(const std::string& text, const std::string& name, const TargetSpec& target,
                  const CsvOptions& options) {
    const auto records = parse_records(text, options.delimiter, name);
    if (records.empty()) throw DataError(name + ": empty file, no header row");
    const auto& header = records.front();
    const std::size_t width = header.size();
    if (records.size() == 1) throw DataError(name + ": zero rows after the header");
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != width) {
            throw DataError(name + ": malformed row " + std::to_string(r) + " has " +
                            std::to_string(records[r].size()) + " cells, expected " +
                            std::to_string(width));
        }
    }

    std::size_t target_index = width;
    if (const auto* by_name = std::get_if<std::string>(&target)) {
        for (std::size_t c = 0; c < width; ++c) {
            if (header[c].text == *by_name) {
                target_index = c;
                break;
            }
        }
        // A numeric-looking target that is not a header name is an index.
        if (target_index == width && !by_name->empty() &&
            std::all_of(by_name->begin(), by_name->end(), [](char ch) {
                return ch >= '0' && ch <= '9';
            })) {
            target_index = static_cast<std::size_t>(std::stoull(*by_name));
        }
    } else {
        target_index = std::get<std::size_t>(target);
        if (target_index == kLastColumn) target_index = width - 1;
    }
    if (target_index >= width) throw DataError(name + ": target column not found");

    std::vector<Column> columns;
    columns.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
        columns.push_back(build_column(header[c].text, records, c, c == target_index, options));
    }
    if (columns[target_index].missing_count() == columns[target_index].codes.size()) {
        throw DataError(name + ": target column '" + columns[target_index].name +
                        "' is entirely missing");
    }
    return Dataset(name, std::move(columns), target_index);
}

Dataset load_csv(const std::filesystem::path& path, const TargetSpec& target,
                 const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": file not found or unreadable");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), path.stem().string(), target, options);
}

std::string to_csv(const Dataset& d, const CsvOptions& options) {
    std::string out;
    const char delim = options.delimiter;
    for (std::size_t c = 0; c < d.column_count(); ++c) {
        if (c > 0) out.push_back(delim);
        out += quote_if_needed(d.column(c).name, delim);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        for (std::size_t c = 0; c < d.column_count(); ++c) {
            if (c > 0) out.push_back(delim);
            const Column& col = d.column(c);
            if (col.is_missing(r)) {
                out += options.missing_token;
            } else if (col.kind == AttributeKind::numeric) {
                out += format_number(col.numbers[r]);
            } else {
                out += quote_if_needed(col.levels[static_cast<std::size_t>(col.codes[r])], delim);
            }
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const Dataset& d, const std::filesystem::path& path, const CsvOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << to_csv(d, options);
}

Dataset impute_missing(const Dataset& d, std::uint64_t seed) {
    std::vector<Column> columns = d.columns();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        Column& col = columns[c];
        const std::size_t n = d.row_count();
        std::vector<std::size_t> donors;
        std::vector<std::size_t> holes;
        for (std::size_t r = 0; r < n; ++r) (col.is_missing(r) ? holes : donors).push_back(r);
        if (holes.empty()) continue;
        if (donors.empty()) {
            throw DataError(d.name() + ": column '" + col.name +
                            "' is entirely missing; nothing to impute from");
        }
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        for (auto r : holes) {
            const auto donor = donors[uniform_index(rng, donors.size())];
            if (col.kind == AttributeKind::numeric) {
                col.numbers[r] = col.numbers[donor];
            } else {
                col.codes[r] = col.codes[donor];
            }
        }
    }
    return Dataset(d.name(), std::move(columns), d.target_index());
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_indices(
    const Dataset& d, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ContractError("train_fraction must lie in (0, 1)");
    }
    if (d.row_count() < 2) throw DataError(d.name() + ": need at least 2 rows to split");
    const auto labels = d.labels();

    std::vector<std::vector<std::size_t>> by_class(d.class_count());
    for (std::size_t r = 0; r < labels.size(); ++r) {
        by_class[static_cast<std::size_t>(labels[r])].push_back(r);
    }

    Rng rng(seed);
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (auto& rows : by_class) {
        if (rows.empty()) continue;
        shuffle(std::span<std::size_t>(rows), rng);
        std::size_t take = 1;
        if (rows.size() >= 2) {
            const auto want = std::lround(train_fraction * static_cast<double>(rows.size()));
            take = std::max<std::size_t>(1, static_cast<std::size_t>(want));
        }
        train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
        test.insert(test.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split_stratified(const Dataset& d, double train_fraction,
                                             std::uint64_t seed) {
    auto [train, test] = stratified_indices(d, train_fraction, seed);
    return {d.subset(train), d.subset(test)};
}

}  // namespace autocash
