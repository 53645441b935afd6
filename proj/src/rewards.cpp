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


#include "autocash/rewards.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "autocash/errors.hpp"
#include "autocash/metrics.hpp"
#include "autocash/random.hpp"

namespace autocash {

std::vector<LabelResult> label_optimal(std::span<const Dataset> datasets,
                                       const Portfolio& portfolio, std::uint64_t seed,
                                       Exec exec) {
    if (datasets.empty()) throw ContractError("label_optimal: no datasets");
    const auto& algs = portfolio.algorithms();
    if (algs.empty()) throw ContractError("label_optimal: empty portfolio");

    const std::size_t n = datasets.size() * algs.size();
    std::vector<double> scores(n, -1.0);
    for_each_index(exec, n, [&](std::size_t t) {
        const std::size_t k = t / algs.size();
        const std::size_t a = t % algs.size();
        try {
            scores[t] = evaluate(algs[a], algs[a].default_config, datasets[k],
                                 derive_seed(seed, static_cast<std::uint64_t>(k)), Exec::serial)
                            .f_score;
        } catch (const DataError&) {
            scores[t] = -1.0;
        }
    });

    std::vector<LabelResult> out;
    for (std::size_t k = 0; k < datasets.size(); ++k) {
        LabelResult r;
        r.dataset = datasets[k].name();
        r.f_scores.assign(scores.begin() + static_cast<std::ptrdiff_t>(k * algs.size()),
                          scores.begin() + static_cast<std::ptrdiff_t>((k + 1) * algs.size()));
        double best = -1.0;
        for (std::size_t a = 0; a < algs.size(); ++a) {
            if (r.f_scores[a] > best) {
                best = r.f_scores[a];
                r.algorithm = algs[a].id;
            }
        }
        if (r.algorithm.empty()) {
            throw DataError("label_optimal: every algorithm failed on " + r.dataset);
        }
        out.push_back(std::move(r));
    }
    return out;
}

MetaDataset build_meta_dataset(std::span<const Dataset> datasets,
                               std::span<const LabelResult> labels) {
    MetaDataset md;
    std::set<std::string> seen;
    for (const auto& d : datasets) {
        if (!seen.insert(d.name()).second) {
            throw DataError("meta-dataset: duplicate dataset name " + d.name());
        }
        const auto it = std::find_if(labels.begin(), labels.end(),
                                     [&](const LabelResult& l) { return l.dataset == d.name(); });
        if (it == labels.end()) throw DataError("meta-dataset: no label for " + d.name());
        md.rows.push_back({d.name(), compute_all(d), it->algorithm});
    }
    return md;
}

RewardEstimate estimate_rewards(const MetaDataset& md, const RewardOptions& options) {
    if (options.min_batch < 1 || options.min_batch > options.max_batch) {
        throw ContractError("rewards: invalid batch size range");
    }
    if (options.max_batch > kMetaFeatureCount) {
        throw ContractError("rewards: batch size " + std::to_string(options.max_batch) +
                            " exceeds " + std::to_string(kMetaFeatureCount));
    }
    if (options.repeats < 1) throw ContractError("rewards: repeats must be at least 1");
    if (md.size() < 5) throw DataError("rewards: need at least 5 meta-dataset rows");

    const std::size_t sizes = options.max_batch - options.min_batch + 1;
    const std::size_t per_feature = sizes * options.repeats;
    const std::size_t tasks = kMetaFeatureCount * per_feature;
    std::vector<double> acc(tasks);

    for_each_index(options.exec, tasks, [&](std::size_t t) {
        const std::size_t f = t / per_feature;
        const std::size_t s = options.min_batch + (t % per_feature) / options.repeats;
        Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(t)));

        std::vector<int> others;
        for (int i = 0; i < static_cast<int>(kMetaFeatureCount); ++i) {
            if (i != static_cast<int>(f)) others.push_back(i);
        }
        // Partial Fisher-Yates: the first s-1 entries become the companions.
        for (std::size_t i = 0; i + 1 < s; ++i) {
            const auto j = i + static_cast<std::size_t>(uniform_index(rng, others.size() - i));
            std::swap(others[i], others[j]);
        }
        std::vector<int> subset(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(s - 1));
        subset.push_back(static_cast<int>(f));
        std::sort(subset.begin(), subset.end());

        ForestParams fp = options.forest;
        fp.seed = rng();
        fp.exec = Exec::serial;
        acc[t] = cross_validated_accuracy(md, std::span<const int>(subset), fp, options.folds, rng());
    });

    RewardEstimate out;
    out.subsets_per_feature = per_feature;
    for (std::size_t f = 0; f < kMetaFeatureCount; ++f) {
        const auto first = acc.begin() + static_cast<std::ptrdiff_t>(f * per_feature);
        out.table.rewards[f] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(per_feature), 0.0) /
                               static_cast<double>(per_feature);
    }
    return out;
}

}  // namespace autocash
