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

#include "autocash/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "autocash/errors.hpp"
#include "autocash/random.hpp"

namespace autocash {

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw ContractError("accuracy: length mismatch");
    if (truth.empty()) throw ContractError("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double auc_binary(std::span<const int> labels, std::span<const double> scores) {
    if (labels.size() != scores.size()) throw ContractError("auc: length mismatch");
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (1-based, tie-averaged) ranks of the positives.
    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) {
                positive_rank_sum += rank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = labels.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw ContractError("AUC undefined: only one class present");
    }
    const double np = static_cast<double>(positives);
    const double nn = static_cast<double>(negatives);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<int> binarize_multiclass(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw ContractError("binarize: length mismatch");
    std::vector<int> out(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) out[i] = truth[i] == predicted[i] ? 0 : 1;
    return out;
}

double f_score(double acc, double auc) {
    if (!(acc >= 0.0 && acc <= 1.0) || !(auc >= 0.0 && auc <= 1.0)) {
        throw ContractError("f_score: inputs must lie in [0, 1]");
    }
    return acc * auc;
}

EvaluationOutcome score_predictions(std::span<const int> truth, const Prediction& prediction) {
    EvaluationOutcome out;
    out.accuracy = accuracy(truth, prediction.labels);

    std::vector<int> labels;
    std::vector<double> scores(truth.size());
    if (prediction.classes == 2) {
        labels.assign(truth.begin(), truth.end());
        for (std::size_t i = 0; i < truth.size(); ++i) scores[i] = prediction.row(i)[1];
    } else {
        labels = binarize_multiclass(truth, prediction.labels);
        for (std::size_t i = 0; i < truth.size(); ++i) {
            scores[i] = 1.0 - prediction.row(i)[static_cast<std::size_t>(prediction.labels[i])];
        }
    }
    const bool both = std::find(labels.begin(), labels.end(), 0) != labels.end() &&
                      std::find(labels.begin(), labels.end(), 1) != labels.end();
    out.auc = both ? auc_binary(labels, scores) : 0.5;
    out.f_score = f_score(out.accuracy, out.auc);
    return out;
}

EvaluationOutcome evaluate(const AlgorithmSpec& spec, const Config& config, const Dataset& d,
                           std::uint64_t seed, Exec exec) {
    try {
        const auto [train, test] = split_stratified(d, kTrainFraction, seed);
        if (test.row_count() == 0) throw DataError("test part is empty");
        const auto model = fit(spec, config, train, derive_seed(seed, "fit"), exec);
        return score_predictions(test.labels(), model->predict_with_scores(test));
    } catch (const ContractError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(spec.id + " on " + d.name() + ": " + e.what());
    }
}

}  // namespace autocash
