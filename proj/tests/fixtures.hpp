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


// Small dataset builders shared by the unit tests.

#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "autocash/random.hpp"
#include "autocash/tabular.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() {
    if (const char* d = std::getenv("AUTOCASH_DATA")) return d;
    return std::filesystem::path(AUTOCASH_SOURCE_DIR) / "data";
}

inline autocash::Dataset csv(const std::string& text, const std::string& name = "fixture",
                             const autocash::TargetSpec& target = autocash::kLastColumn) {
    return autocash::parse_csv(text, name, target);
}

// Two well separated Gaussian-free clusters: class a near 0, class b near 10.
inline autocash::Dataset two_clusters(std::size_t per_class, std::uint64_t seed = 1) {
    autocash::Rng rng(seed);
    std::ostringstream s;
    s << "x1,x2,y\n";
    for (std::size_t i = 0; i < per_class; ++i) {
        s << autocash::uniform01(rng) << "," << autocash::uniform01(rng) << ",a\n";
        s << 10 + autocash::uniform01(rng) << "," << 10 + autocash::uniform01(rng) << ",b\n";
    }
    return csv(s.str(), "clusters");
}

// Binary target with `minority` rows of class b among `rows`.
inline autocash::Dataset imbalanced(std::size_t rows, std::size_t minority, std::uint64_t seed = 2) {
    autocash::Rng rng(seed);
    std::ostringstream s;
    s << "x,y\n";
    for (std::size_t i = 0; i < rows; ++i) {
        s << autocash::uniform01(rng) << "," << (i < minority ? "b" : "a") << "\n";
    }
    return csv(s.str(), "imbalanced");
}

// Three numeric attributes, one categorical, three classes driven by x1.
inline autocash::Dataset mixed(std::size_t rows, std::uint64_t seed = 3) {
    autocash::Rng rng(seed);
    std::ostringstream s;
    s << "x1,x2,color,x3,y\n";
    const char* colors[] = {"red", "green", "blue"};
    for (std::size_t i = 0; i < rows; ++i) {
        const double x1 = 3.0 * autocash::uniform01(rng);
        s << x1 << "," << autocash::uniform01(rng) << "," << colors[autocash::uniform_index(rng, 3)]
          << "," << 5.0 * autocash::uniform01(rng) << ",c" << static_cast<int>(x1) << "\n";
    }
    return csv(s.str(), "mixed");
}

// Two interleaved spirals: nearest neighbours separate them, axis splits and
// linear boundaries struggle.
inline autocash::Dataset spirals(std::size_t rows, std::uint64_t seed = 10) {
    autocash::Rng rng(seed);
    std::ostringstream s;
    s << "x1,x2,y\n";
    for (std::size_t i = 0; i < rows; ++i) {
        const double t = 0.5 + 3.0 * autocash::uniform01(rng) * 3.14159;
        const double a = t + static_cast<double>(i % 2) * 3.14159;
        s << t * std::cos(a) << "," << t * std::sin(a) << "," << (i % 2 ? "b" : "a") << "\n";
    }
    return csv(s.str(), "spirals");
}

}  // namespace fixtures
