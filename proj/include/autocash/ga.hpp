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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "autocash/metrics.hpp"
#include "autocash/parallel.hpp"
#include "autocash/portfolio.hpp"
#include "autocash/random.hpp"

namespace autocash {

using Bits = std::vector<std::uint8_t>;

/// A fixed-width binary genotype: the concatenated fields of the tunable
/// hyperparameters in declaration order, most significant bit first.
struct Chromosome {
    Bits bits;
    std::optional<double> fitness;

    std::size_t size() const { return bits.size(); }
    bool operator==(const Chromosome&) const = default;
};

struct GAParams {
    std::size_t population = 20;
    /// Cap on evolution steps after the initial population.
    std::size_t generations = 50;
    double crossover_prob = 0.9;
    /// Per-bit flip probability; unset means 1 / chromosome length.
    std::optional<double> mutation_prob;
    std::size_t tournament = 3;
    std::size_t elitism = 1;
    /// Stop after this many consecutive generations without a new best.
    std::size_t stagnation_limit = 10;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;

    void validate() const;
};

struct GenerationStats {
    std::size_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
    std::size_t failures = 0;
};

struct GAResult {
    Bits best_bits;
    double best_fitness = 0.0;
    std::vector<GenerationStats> history;
    std::size_t generations_run = 0;
    /// Distinct genotypes evaluated (the fitness cache size).
    std::size_t evaluations = 0;
};

// ---- encoding ----

/// Total width of the tunable fields.
std::size_t chromosome_length(const AlgorithmSpec& spec);

/// Field value -> domain value; total over [0, 2^bits).
ParamValue decode_value(const HyperparamSpec& p, std::uint64_t code);
/// Smallest code that decodes to `value`; ContractError when out of domain.
std::uint64_t encode_value(const HyperparamSpec& p, const ParamValue& value);

Chromosome encode(const AlgorithmSpec& spec, const Config& config);
/// Tunable entries come from the bits, the others from the defaults.
Config decode(const AlgorithmSpec& spec, const Chromosome& c);

// ---- operators ----

/// Exchanges the tails after `cut` (1 <= cut <= length-1).
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t cut);
/// With probability `prob` a single-point crossover at a uniform cut,
/// otherwise copies of the parents.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double prob,
                                            Rng& rng);
/// Flips each bit independently with probability `rate`.
Chromosome mutate(const Chromosome& c, double rate, Rng& rng);
/// Best of `size` uniform draws (with replacement); lowest index on ties.
std::size_t tournament_select(std::span<const double> fitness, std::size_t size, Rng& rng);

// ---- engine ----

/// Scores a batch of genotypes; std::nullopt marks a failed evaluation,
/// which counts as fitness 0.
using BatchFitness =
    std::function<std::vector<std::optional<double>>(std::span<const Bits> genotypes)>;

/// Generational GA maximizing fitness. Individuals in `seeds` fill the first
/// population slots, the rest are uniform random. Fitness is cached by
/// genotype, so `fitness` only ever sees unseen genotypes.
GAResult evolve(std::size_t length, const BatchFitness& fitness, const GAParams& params,
                std::span<const Bits> seeds = {});

// ---- hyperparameter optimization ----

struct OptimizeResult {
    Config best_config;
    double best_f_score = 0.0;
    std::vector<GenerationStats> history;
    std::size_t generations_run = 0;
    std::size_t evaluations = 0;
    std::uint64_t split_seed = 0;
};

/// Split seed shared by every fitness evaluation of one optimize() run.
std::uint64_t evaluation_seed(const GAParams& params);

/// Maximizes evaluate(...).f_score over the tunable hyperparameters. The
/// default configuration is individual 0, so the result never scores below it.
OptimizeResult optimize(const AlgorithmSpec& spec, const Dataset& d, const GAParams& params);

struct ScreeningReport {
    AlgorithmSpec spec;
    /// Mean (tuned - default) f_score per hyperparameter, in declaration order.
    std::vector<double> improvements;
};

/// Tunes each hyperparameter alone on every dataset and keeps it tunable iff
/// the mean improvement over the default reaches `threshold`.
ScreeningReport screen_hyperparameters(const AlgorithmSpec& spec, std::span<const Dataset> datasets,
                                       double threshold, const GAParams& params);

inline constexpr double kDefaultScreeningThreshold = 0.02;

}  // namespace autocash
