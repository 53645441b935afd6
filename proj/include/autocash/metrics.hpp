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

#include <cstdint>
#include <span>
#include <vector>

#include "autocash/portfolio.hpp"
#include "autocash/tabular.hpp"

namespace autocash {

/// Accuracy, AUC and their product, the composite score every search in this
/// library maximizes.
struct EvaluationOutcome {
    double accuracy = 0.0;
    double auc = 0.0;
    double f_score = 0.0;

    bool operator==(const EvaluationOutcome&) const = default;
};

/// Fraction of positions where the labels agree.
double accuracy(std::span<const int> truth, std::span<const int> predicted);

/// Mann-Whitney AUC with label 1 as the positive class: the probability that
/// a positive outscores a negative, ties counting one half. Throws
/// ContractError("AUC undefined ...") when either class is absent.
double auc_binary(std::span<const int> labels, std::span<const double> scores);

/// 0 where the prediction is correct, 1 where it is wrong.
std::vector<int> binarize_multiclass(std::span<const int> truth, std::span<const int> predicted);

/// accuracy * auc; both must lie in [0, 1].
double f_score(double accuracy, double auc);

/// Scores held-out predictions. Two-class targets rank the class-1
/// probability; other targets rank 1 - p(predicted class) against the
/// correct/wrong labels. A single-class fold yields AUC 0.5.
EvaluationOutcome score_predictions(std::span<const int> truth, const Prediction& prediction);

/// Stratified 80/20 split under `seed`, fit on the train part, score the
/// test part. Failures are rethrown as DataError prefixed with the algorithm.
EvaluationOutcome evaluate(const AlgorithmSpec& spec, const Config& config, const Dataset& d,
                           std::uint64_t seed, Exec exec = Exec::parallel);

inline constexpr double kTrainFraction = 0.8;

}  // namespace autocash
