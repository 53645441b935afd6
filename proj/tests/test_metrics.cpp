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
#include <cmath>
#include <numeric>

#include "autocash/errors.hpp"
#include "autocash/metrics.hpp"
#include "fixtures.hpp"

using namespace autocash;

namespace {

double pairwise_auc(const std::vector<int>& y, const std::vector<double>& s) {
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[i] != 1 || y[j] != 0) continue;
            pairs += 1;
            wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
        }
    }
    return wins / pairs;
}

}  // namespace

TEST_CASE("accuracy examples") {
    CHECK(accuracy(std::vector<int>{0, 1, 0}, std::vector<int>{0, 1, 1}) == doctest::Approx(2.0 / 3));
    CHECK(accuracy(std::vector<int>{2, 1}, std::vector<int>{2, 1}) == 1.0);
    CHECK(accuracy(std::vector<int>{0, 0}, std::vector<int>{1, 1}) == 0.0);
    CHECK_THROWS_AS(accuracy(std::vector<int>{0}, std::vector<int>{0, 1}), ContractError);
    CHECK_THROWS_AS(accuracy(std::vector<int>{}, std::vector<int>{}), ContractError);
}

TEST_CASE("auc examples") {
    CHECK(auc_binary(std::vector<int>{1, 1, 0, 0}, std::vector<double>{0.9, 0.8, 0.2, 0.1}) == 1.0);
    CHECK(auc_binary(std::vector<int>{1, 0}, std::vector<double>{0.3, 0.3}) == 0.5);
    CHECK(auc_binary(std::vector<int>{1, 0, 1, 0}, std::vector<double>{0.8, 0.7, 0.6, 0.5}) == 0.75);
    CHECK(pairwise_auc({1, 0, 1, 0}, {0.8, 0.7, 0.6, 0.5}) == 0.75);
}

TEST_CASE("auc is undefined for a single class") {
    try {
        auc_binary(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2});
        FAIL("expected ContractError");
    } catch (const ContractError& e) {
        CHECK(std::string(e.what()).find("AUC undefined") != std::string::npos);
    }
}

TEST_CASE("rank auc matches brute-force pairs and is invariant to increasing transforms") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 60);
        std::vector<int> y(n);
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = static_cast<int>(uniform_index(rng, 2));
            s[i] = static_cast<double>(uniform_index(rng, 8)) / 8.0;  // many ties
        }
        y[0] = 0;
        y[1] = 1;
        const double a = auc_binary(y, s);
        CHECK(a == doctest::Approx(pairwise_auc(y, s)).epsilon(1e-12));
        std::vector<double> t(n);
        std::transform(s.begin(), s.end(), t.begin(), [](double x) { return std::exp(3 * x) - 7; });
        CHECK(auc_binary(y, t) == doctest::Approx(a).epsilon(1e-12));
    }
}

TEST_CASE("binarization follows correct -> 0, wrong -> 1") {
    CHECK(binarize_multiclass(std::vector<int>{0, 1}, std::vector<int>{0, 1}) == std::vector<int>{0, 0});
    CHECK(binarize_multiclass(std::vector<int>{0, 1}, std::vector<int>{1, 0}) == std::vector<int>{1, 1});
    CHECK(binarize_multiclass(std::vector<int>{0, 1, 2}, std::vector<int>{0, 2, 2}) == std::vector<int>{0, 1, 0});
    CHECK_THROWS_AS(binarize_multiclass(std::vector<int>{0}, std::vector<int>{}), ContractError);
}

TEST_CASE("f_score") {
    CHECK(f_score(0.99, 0.5) == doctest::Approx(0.495).epsilon(1e-15));
    CHECK(f_score(1.0, 0.37) == 0.37);
    CHECK(f_score(0.0, 0.8) == 0.0);
    CHECK_THROWS_AS(f_score(1.1, 0.5), ContractError);
    CHECK_THROWS_AS(f_score(0.5, -0.1), ContractError);
}

TEST_CASE("multi-class scoring ranks wrongness") {
    Prediction p;
    p.classes = 3;
    p.labels = {0, 1, 2, 0};
    p.probabilities = {0.9, 0.05, 0.05,  //
                       0.2, 0.7, 0.1,    //
                       0.3, 0.3, 0.4,    //
                       0.5, 0.4, 0.1};
    const std::vector<int> truth{0, 1, 0, 1};
    const auto o = score_predictions(truth, p);
    CHECK(o.accuracy == 0.5);
    // wrong rows score 0.6 and 0.5, correct rows 0.1 and 0.3
    CHECK(o.auc == 1.0);
    CHECK(o.f_score == o.accuracy * o.auc);
}

TEST_CASE("all-correct multi-class fold gets AUC one half") {
    Prediction p;
    p.classes = 3;
    p.labels = {0, 1, 2};
    p.probabilities = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    const auto o = score_predictions(std::vector<int>{0, 1, 2}, p);
    CHECK(o.accuracy == 1.0);
    CHECK(o.auc == 0.5);
}

TEST_CASE("majority baseline on a 99:1 dataset") {
    const Dataset d = fixtures::imbalanced(1000, 10);
    const Portfolio portfolio = Portfolio::standard();
    const auto& spec = portfolio.at(algorithm_ids::kMajority);
    const auto o = evaluate(spec, spec.default_config, d, 5);
    CHECK(o.accuracy == doctest::Approx(0.99));
    CHECK(o.auc == 0.5);
    CHECK(o.f_score == doctest::Approx(0.495));
}

TEST_CASE("decision tree separates two clusters perfectly") {
    const Portfolio portfolio = Portfolio::standard();
    const auto& spec = portfolio.at(algorithm_ids::kDecisionTree);
    const auto o = evaluate(spec, spec.default_config, fixtures::two_clusters(40), 9);
    CHECK(o.accuracy == 1.0);
    CHECK(o.auc == 1.0);
    CHECK(o.f_score == 1.0);
}

TEST_CASE("evaluation is deterministic and consistent across execution policies") {
    const Dataset d = fixtures::mixed(120, 4);
    for (const auto& spec : list_algorithms()) {
        const auto a = evaluate(spec, spec.default_config, d, 17, Exec::serial);
        const auto b = evaluate(spec, spec.default_config, d, 17, Exec::parallel);
        CHECK(a == b);
        CHECK(a.f_score == a.accuracy * a.auc);
        CHECK(a.f_score <= std::min(a.accuracy, a.auc));
    }
}

TEST_CASE("evaluation errors carry the algorithm id") {
    const Dataset tiny = fixtures::csv("x,y\n1,a\n");
    const Portfolio portfolio = Portfolio::standard();
    const auto& spec = portfolio.at(algorithm_ids::kKnn);
    try {
        evaluate(spec, spec.default_config, tiny, 0);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find(algorithm_ids::kKnn) != std::string::npos);
    }
    Config bad{{"k", std::int64_t{99}}};
    CHECK_THROWS_AS(evaluate(spec, bad, fixtures::two_clusters(10), 0), ContractError);
}
