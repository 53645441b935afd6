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

#include <numeric>
#include <set>

#include "autocash/errors.hpp"
#include "autocash/ga.hpp"
#include "fixtures.hpp"

using namespace autocash;
namespace ids = algorithm_ids;

namespace {

Chromosome bits(const std::string& s) {
    Chromosome c;
    for (char ch : s) c.bits.push_back(ch == '1');
    return c;
}

std::string str(const Chromosome& c) {
    std::string s;
    for (auto b : c.bits) s += b ? '1' : '0';
    return s;
}

BatchFitness onemax() {
    return [](std::span<const Bits> g) {
        std::vector<std::optional<double>> v;
        for (const auto& b : g) v.push_back(std::accumulate(b.begin(), b.end(), 0.0));
        return v;
    };
}

}  // namespace

TEST_CASE("integer and categorical field decoding") {
    const HyperparamSpec k{"k", IntegerRange{1, 32}, 5};
    CHECK(std::get<std::int64_t>(decode_value(k, 0)) == 1);
    CHECK(std::get<std::int64_t>(decode_value(k, 31)) == 32);
    const HyperparamSpec w{"w", CategoricalSet{{"uniform", "inverse"}}, 1};
    CHECK(std::get<std::string>(decode_value(w, 0)) == "uniform");
    CHECK(std::get<std::string>(decode_value(w, 1)) == "inverse");
    const HyperparamSpec three{"c", CategoricalSet{{"a", "b", "c"}}, 2};
    CHECK(std::get<std::string>(decode_value(three, 3)) == "a");
    const HyperparamSpec l2{"l2", Log2Grid{-10, 4}, 4};
    CHECK(std::get<double>(decode_value(l2, 0)) == std::ldexp(1.0, -10));
    CHECK(std::get<double>(decode_value(l2, 15)) == 16.0);
}

TEST_CASE("exhaustive round trip over every declared domain") {
    for (const auto& spec : list_algorithms()) {
        for (const auto& h : spec.hyperparameters) {
            INFO(spec.id << "." << h.name);
            std::set<std::string> reached;
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << h.bits); ++v) {
                const auto value = decode_value(h, v);
                CHECK(h.contains(value));
                reached.insert(to_string(value));
                // encode returns the smallest code decoding to the value
                std::uint64_t smallest = 0;
                while (decode_value(h, smallest) != value) ++smallest;
                CHECK(encode_value(h, value) == smallest);
            }
            CHECK(reached.size() == h.cardinality());
        }
        // configuration-level round trip for the default and a decoded config
        CHECK(decode(spec, encode(spec, spec.default_config)) == spec.complete(spec.default_config));
    }
    const HyperparamSpec k{"k", IntegerRange{1, 32}, 5};
    CHECK(std::get<std::int64_t>(decode_value(k, encode_value(k, std::int64_t{17}))) == 17);
    CHECK_THROWS_AS(encode_value(k, std::int64_t{33}), ContractError);
    CHECK_THROWS_AS(encode_value(k, std::string("x")), ContractError);
}

TEST_CASE("chromosome layout follows tunable declaration order") {
    Portfolio p = Portfolio::standard();
    const auto& rf = p.at(ids::kRandomForest);
    CHECK(chromosome_length(rf) == 8 + 5);
    p.set_tunable(ids::kRandomForest, "trees", false);
    const auto& reduced = p.at(ids::kRandomForest);
    CHECK(chromosome_length(reduced) == 5);
    const Config c = decode(reduced, bits("11111"));
    CHECK(std::get<std::int64_t>(c.at("max_depth")) == 32);
    CHECK(c.at("trees") == reduced.default_config.at("trees"));
    CHECK_THROWS_AS(decode(reduced, bits("1111")), ContractError);
}

TEST_CASE("crossover") {
    auto [x, y] = crossover_at(bits("0000"), bits("1111"), 2);
    CHECK(str(x) == "0011");
    CHECK(str(y) == "1100");
    auto [s, t] = crossover_at(bits("0110"), bits("0110"), 1);
    CHECK(str(s) == "0110");
    CHECK(str(t) == "0110");
    CHECK_THROWS_AS(crossover_at(bits("01"), bits("011"), 1), ContractError);
    CHECK_THROWS_AS(crossover_at(bits("0101"), bits("1010"), 4), ContractError);
    Rng rng(1);
    CHECK_THROWS_AS(crossover(bits("01"), bits("011"), 1.0, rng), ContractError);
    for (int i = 0; i < 200; ++i) {
        const auto a = bits("0100110101101");
        const auto b = bits("1110001011000");
        const auto [c, d] = crossover(a, b, 0.9, rng);
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(c.bits[k] + d.bits[k] == a.bits[k] + b.bits[k]);
        }
        const auto [e, f] = crossover(a, b, 0.0, rng);
        CHECK(e.bits == a.bits);
        CHECK(f.bits == b.bits);
    }
}

TEST_CASE("mutation") {
    Rng rng(2);
    const auto c = bits("0110100111010010");
    CHECK(mutate(c, 0.0, rng).bits == c.bits);
    const auto flipped = mutate(c, 1.0, rng);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(flipped.bits[k] == 1 - c.bits[k]);

    const Chromosome zero{Bits(32, 0), std::nullopt};
    double flips = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const auto m = mutate(zero, 1.0 / 32, rng);
        flips += std::accumulate(m.bits.begin(), m.bits.end(), 0.0);
    }
    CHECK(flips / 10000 == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("tournament selection") {
    Rng rng(3);
    const std::vector<double> f{0.5, 0.9, 0.9, 0.1};
    for (int i = 0; i < 100; ++i) {
        const auto w = tournament_select(f, 20, rng);
        CHECK(w == 1);  // with 20 draws the maximum is virtually always drawn; tie goes low
    }
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 4000; ++i) counts[tournament_select(f, 1, rng)]++;
    for (int c : counts) CHECK(std::abs(c - 1000) < 150);
}

TEST_CASE("evolve solves OneMax and keeps the best monotone") {
    GAParams p;
    p.stagnation_limit = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        p.seed = s;
        const auto r = evolve(32, onemax(), p);
        CHECK(r.best_fitness == 32);
        CHECK(std::accumulate(r.best_bits.begin(), r.best_bits.end(), 0) == 32);
        for (std::size_t g = 1; g < r.history.size(); ++g) CHECK(r.history[g].best >= r.history[g - 1].best);
        CHECK(r.history.size() == r.generations_run + 1);
    }
}

TEST_CASE("fitness is cached by genotype") {
    std::set<Bits> seen;
    bool repeated = false;
    const BatchFitness f = [&](std::span<const Bits> g) {
        std::vector<std::optional<double>> v;
        for (const auto& b : g) {
            repeated |= !seen.insert(b).second;
            v.push_back(std::accumulate(b.begin(), b.end(), 0.0));
        }
        return v;
    };
    GAParams p;
    p.seed = 4;
    const auto r = evolve(6, f, p);
    CHECK_FALSE(repeated);
    CHECK(r.evaluations == seen.size());
    CHECK(seen.size() <= 64);
}

TEST_CASE("failed evaluations score zero and are counted") {
    const BatchFitness f = [](std::span<const Bits> g) {
        std::vector<std::optional<double>> v;
        for (const auto& b : g) {
            if (b[0]) v.push_back(std::nullopt);
            else v.push_back(std::accumulate(b.begin(), b.end(), 0.0));
        }
        return v;
    };
    GAParams p;
    p.seed = 5;
    const auto r = evolve(8, f, p);
    CHECK(r.best_fitness == 7);
    CHECK(r.best_bits[0] == 0);
    std::size_t failures = 0;
    for (const auto& g : r.history) failures += g.failures;
    CHECK(failures > 0);
}

TEST_CASE("an identical population without variation is a fixed point") {
    GAParams p;
    p.mutation_prob = 0.0;
    p.crossover_prob = 0.0;
    p.generations = 5;
    p.stagnation_limit = 0;
    const std::vector<Bits> seeds(p.population, Bits{1, 0, 1, 1, 0});
    std::size_t calls = 0;
    const BatchFitness f = [&](std::span<const Bits> g) {
        calls += g.size();
        return std::vector<std::optional<double>>(g.size(), 1.0);
    };
    const auto r = evolve(5, f, p, seeds);
    CHECK(calls == 1);
    CHECK(r.best_bits == seeds[0]);
    CHECK(r.generations_run == 5);
}

TEST_CASE("stagnation stops the run") {
    GAParams p;
    p.seed = 6;
    const BatchFitness flat = [](std::span<const Bits> g) {
        return std::vector<std::optional<double>>(g.size(), 0.5);
    };
    const auto r = evolve(10, flat, p);
    CHECK(r.generations_run == 10);
}

TEST_CASE("GA parameter validation") {
    GAParams p;
    p.population = 1;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p = GAParams{};
    p.crossover_prob = 1.5;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p = GAParams{};
    p.generations = 0;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p = GAParams{};
    p.mutation_prob = -0.1;
    CHECK_THROWS_AS(p.validate(), ContractError);
}

TEST_CASE("optimize without tunable hyperparameters returns the default") {
    const Portfolio p = Portfolio::standard();
    GAParams g;
    g.seed = 1;
    const auto r = optimize(p.at(ids::kMajority), fixtures::imbalanced(100, 20), g);
    CHECK(r.best_config.empty());
    CHECK(r.generations_run == 0);
    CHECK(r.history.empty());
}

TEST_CASE("optimize never loses to the default configuration") {
    const Portfolio p = Portfolio::standard();
    const Dataset d = fixtures::mixed(120, 9);
    GAParams g;
    g.generations = 8;
    g.population = 8;
    for (const auto& spec : p.algorithms()) {
        INFO(spec.id);
        g.seed = 31;
        const auto r = optimize(spec, d, g);
        const auto base = evaluate(spec, spec.default_config, d, r.split_seed);
        CHECK(r.best_f_score >= base.f_score);
        CHECK(evaluate(spec, r.best_config, d, r.split_seed).f_score == r.best_f_score);
        GAParams serial = g;
        serial.exec = Exec::serial;
        const auto again = optimize(spec, d, serial);
        CHECK(again.best_config == r.best_config);
        CHECK(again.best_f_score == r.best_f_score);
    }
}

TEST_CASE("screening keeps only parameters that help") {
    const Portfolio p = Portfolio::standard();
    GAParams g;
    g.generations = 5;
    g.population = 6;
    g.seed = 2;
    // Every depth and split size separates the clusters perfectly.
    const std::vector<Dataset> easy{fixtures::two_clusters(30, 1), fixtures::two_clusters(30, 2)};
    const auto flat = screen_hyperparameters(p.at(ids::kDecisionTree), easy, 0.02, g);
    CHECK(flat.improvements == std::vector<double>{0.0, 0.0});
    for (const auto& h : flat.spec.hyperparameters) CHECK_FALSE(h.tunable);

    const std::vector<Dataset> noisy{fixtures::mixed(90, 1), fixtures::mixed(90, 2)};
    const auto zero = screen_hyperparameters(p.at(ids::kKnn), noisy, 0.0, g);
    for (std::size_t i = 0; i < zero.improvements.size(); ++i) {
        CHECK(zero.improvements[i] >= 0.0);
        CHECK(zero.spec.hyperparameters[i].tunable);
    }

    CHECK_THROWS_AS(screen_hyperparameters(p.at(ids::kKnn), std::vector<Dataset>{}, 0.02, g), ContractError);
    CHECK_THROWS_AS(screen_hyperparameters(p.at(ids::kMajority), easy, 0.02, g), ContractError);
}
