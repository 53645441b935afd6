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

#include "autocash/kernels.hpp"

#include "autocash/errors.hpp"

namespace autocash::kernels {

namespace {

inline double row_distance(const double* a, const double* b, std::size_t dims) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc;
}

}  // namespace

std::vector<double> squared_distances(std::span<const double> queries,
                                      std::span<const double> references, std::size_t dims,
                                      Exec exec) {
    if (dims == 0) throw ContractError("squared_distances: zero dimensions");
    if (queries.size() % dims != 0 || references.size() % dims != 0) {
        throw ContractError("squared_distances: input size not a multiple of dims");
    }
    const auto nq = static_cast<long long>(queries.size() / dims);
    const auto nr = references.size() / dims;
    std::vector<double> out(static_cast<std::size_t>(nq) * nr);
    const double* q = queries.data();
    const double* r = references.data();
    double* o = out.data();

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < nq; ++i) {
            const auto row = static_cast<std::size_t>(i);
            for (std::size_t j = 0; j < nr; ++j) {
                o[row * nr + j] = row_distance(q + row * dims, r + j * dims, dims);
            }
        }
    } else {
        for (std::size_t i = 0; i < static_cast<std::size_t>(nq); ++i) {
            for (std::size_t j = 0; j < nr; ++j) {
                o[i * nr + j] = row_distance(q + i * dims, r + j * dims, dims);
            }
        }
    }
    return out;
}

}  // namespace autocash::kernels
