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


#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "autocash/errors.hpp"
#include "autocash/metrics.hpp"
#include "autocash/rewards.hpp"
#include "fixtures.hpp"

using namespace autocash;
namespace ids = algorithm_ids;

namespace {

Portfolio with_one_nn() {
    auto algs = list_algorithms();
    for (auto& a : algs) {
        if (a.id == ids::kKnn) a.default_config["k"] = std::int64_t{1};
    }
    return Portfolio(algs);
}

// Random features; the label is either noise or a function of mf0.
MetaDataset synthetic(std::size_t rows, bool driven_by_mf0, std::uint64_t seed) {
    Rng rng(seed);
    MetaDataset md;
    const char* names[] = {"a", "b", "c"};
    for (std::size_t i = 0; i < rows; ++i) {
        MetaRow r;
        r.dataset = "d" + std::to_string(i);
        for (auto& v : r.features.values) v = uniform01(rng);
        const auto cls = uniform_index(rng, 3);
        r.features.values[0] = driven_by_mf0 ? 2.0 + static_cast<double>(cls) : r.features.values[0];
        r.label = names[cls];
        md.rows.push_back(r);
    }
    return md;
}

RewardOptions quick(std::size_t repeats, std::uint64_t seed) {
    RewardOptions o;
    o.repeats = repeats;
    o.seed = seed;
    o.forest.trees = 25;
    return o;
}

}  // namespace

TEST_CASE("labeling picks the algorithm with the best default score") {
    const Portfolio p = with_one_nn();
    const Dataset d = fixtures::spirals(200);
    const std::vector<Dataset> ds{d};
    const std::uint64_t seed = 0;
    const auto labels = label_optimal(ds, p, seed);
    REQUIRE(labels.size() == 1);
    CHECK(labels[0].algorithm == ids::kKnn);
    // all six scores recomputed directly
    const auto split = derive_seed(seed, std::uint64_t{0});
    for (std::size_t a = 0; a < p.algorithms().size(); ++a) {
        const auto& spec = p.algorithms()[a];
        const double direct = evaluate(spec, spec.default_config, d, split).f_score;
        CHECK(labels[0].f_scores[a] == direct);
        if (spec.id == ids::kKnn) CHECK(direct == 1.0);
        else CHECK(direct < 1.0);
    }
}

TEST_CASE("labeling ties go to the earlier portfolio entry") {
    const Portfolio p = Portfolio::standard();
    const std::vector<Dataset> ds{fixtures::two_clusters(30)};
    const auto labels = label_optimal(ds, p, 1);
    const auto& s = labels[0].f_scores;
    const double best = *std::max_element(s.begin(), s.end());
    CHECK(std::count(s.begin(), s.end(), best) >= 2);
    const auto first = static_cast<std::size_t>(std::find(s.begin(), s.end(), best) - s.begin());
    CHECK(labels[0].algorithm == p.algorithms()[first].id);
}

TEST_CASE("labeling with a single-algorithm portfolio") {
    const Portfolio p(std::vector<AlgorithmSpec>{Portfolio::standard().at(ids::kNaiveBayes)});
    const std::vector<Dataset> ds{fixtures::mixed(50), fixtures::spirals(60), fixtures::two_clusters(20)};
    for (const auto& l : label_optimal(ds, p, 8)) CHECK(l.algorithm == ids::kNaiveBayes);
}

TEST_CASE("labeling fails when every algorithm fails") {
    const std::vector<Dataset> ds{fixtures::csv("x,y\n1,a\n")};
    CHECK_THROWS_AS(label_optimal(ds, Portfolio::standard(), 0), DataError);
    CHECK_THROWS_AS(label_optimal(std::vector<Dataset>{}, Portfolio::standard(), 0), ContractError);
}

TEST_CASE("labeling is identical under both execution policies") {
    const std::vector<Dataset> ds{fixtures::mixed(60, 1), fixtures::spirals(80, 2)};
    const auto a = label_optimal(ds, Portfolio::standard(), 5, Exec::serial);
    const auto b = label_optimal(ds, Portfolio::standard(), 5, Exec::parallel);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].algorithm == b[i].algorithm);
        CHECK(a[i].f_scores == b[i].f_scores);
    }
}

TEST_CASE("meta-dataset rows pair meta-features with labels") {
    const std::vector<Dataset> ds{fixtures::mixed(50, 1), fixtures::spirals(60), fixtures::two_clusters(20)};
    const auto labels = label_optimal(ds, Portfolio::standard(), 2);
    const auto md = build_meta_dataset(ds, labels);
    REQUIRE(md.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(md.rows[i].dataset == ds[i].name());
        CHECK(md.rows[i].features == compute_all(ds[i]));
        CHECK(md.rows[i].label == labels[i].algorithm);
    }
    const std::vector<Dataset> dup{fixtures::mixed(50, 1), fixtures::mixed(40, 2)};
    CHECK_THROWS_AS(build_meta_dataset(dup, labels), DataError);
    const std::vector<LabelResult> partial(labels.begin(), labels.begin() + 1);
    CHECK_THROWS_AS(build_meta_dataset(ds, partial), DataError);
}

TEST_CASE("rewards on label noise sit near chance") {
    const auto md = synthetic(60, false, 1);
    const auto est = estimate_rewards(md, quick(2, 7));
    CHECK(est.subsets_per_feature == 14);
    for (double r : est.table.rewards) CHECK(std::abs(r - 1.0 / 3) <= 0.1);
}

TEST_CASE("the informative meta-feature earns the largest reward") {
    const auto md = synthetic(60, true, 2);
    const auto est = estimate_rewards(md, quick(2, 9));
    const auto& r = est.table.rewards;
    const double others = std::accumulate(r.begin() + 1, r.end(), 0.0) / 22.0;
    CHECK(r[0] > others);
    CHECK(r[0] == *std::max_element(r.begin(), r.end()));
    for (double v : r) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("reward estimation is deterministic and policy independent") {
    const auto md = synthetic(30, true, 3);
    RewardOptions a = quick(1, 4);
    RewardOptions b = a;
    b.exec = Exec::serial;
    CHECK(estimate_rewards(md, a).table == estimate_rewards(md, b).table);
    CHECK(estimate_rewards(md, a).table == estimate_rewards(md, a).table);
}

TEST_CASE("duplicating a row does not collapse the rewards") {
    auto md = synthetic(40, true, 5);
    const auto before = estimate_rewards(md, quick(2, 11)).table;
    md.rows.push_back(md.rows[3]);
    md.rows.back().dataset = "copy";
    const auto after = estimate_rewards(md, quick(2, 11)).table;
    for (std::size_t f = 0; f < kMetaFeatureCount; ++f) CHECK(after[f] >= before[f] - 0.15);
}

TEST_CASE("reward estimation preconditions") {
    const auto md = synthetic(10, false, 6);
    RewardOptions o = quick(1, 0);
    o.max_batch = 24;
    CHECK_THROWS_AS(estimate_rewards(md, o), ContractError);
    o = quick(0, 0);
    CHECK_THROWS_AS(estimate_rewards(md, o), ContractError);
    const auto small = synthetic(4, false, 6);
    CHECK_THROWS_AS(estimate_rewards(small, quick(1, 0)), DataError);
}
