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
#include <exception>
#include <vector>

namespace autocash {

/// Selects between the OpenMP kernel and the serial reference loop.
/// Every parallel kernel in the library derives per-task seeds from the task
/// index, so both policies produce bit-identical results.
enum class Exec { serial, parallel };

/// Runs fn(i) for i in [0, n). Exceptions thrown by tasks are collected and
/// the one from the lowest index is rethrown after the loop.
template <typename Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < count; ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        // The first failure is also the lowest index.
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace autocash
