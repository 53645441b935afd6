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
#include <span>
#include <vector>

#include "autocash/parallel.hpp"

namespace autocash::kernels {

/// Squared Euclidean distance from every query row to every reference row,
/// returned row-major as (queries x references). Both inputs are row-major
/// with `dims` columns.
std::vector<double> squared_distances(std::span<const double> queries,
                                      std::span<const double> references, std::size_t dims,
                                      Exec exec);

}  // namespace autocash::kernels
