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

#include "autocash/ga.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "autocash/errors.hpp"

namespace autocash {

namespace {

// lo + round(code * (hi - lo) / (2^bits - 1)), rounding halves up.
std::int64_t scale_code(std::uint64_t code, int bits, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t top = (std::uint64_t{1} << bits) - 1;
    if (top == 0 || hi == lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo);
    return lo + static_cast<std::int64_t>((2 * code * span + top) / (2 * top));
}

std::uint64_t read_field(const Bits& bits, std::size_t offset, int width) {
    std::uint64_t v = 0;
    for (int j = 0; j < width; ++j) v = (v << 1) | (bits[offset + static_cast<std::size_t>(j)] & 1u);
    return v;
}

void write_field(Bits& bits, std::size_t offset, int width, std::uint64_t v) {
    for (int j = width - 1; j >= 0; --j) {
        bits[offset + static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(v & 1u);
        v >>= 1;
    }
}

}  // namespace

void GAParams::validate() const {
    if (population < 2) throw ContractError("GA: population must be at least 2");
    if (generations < 1) throw ContractError("GA: generations must be at least 1");
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
        throw ContractError("GA: crossover probability outside [0, 1]");
    }
    if (mutation_prob && !(*mutation_prob >= 0.0 && *mutation_prob <= 1.0)) {
        throw ContractError("GA: mutation probability outside [0, 1]");
    }
    if (tournament < 1) throw ContractError("GA: tournament size must be at least 1");
    if (elitism > population) throw ContractError("GA: elitism exceeds population");
}

std::size_t chromosome_length(const AlgorithmSpec& spec) {
    std::size_t n = 0;
    for (const auto& p : spec.hyperparameters) {
        if (p.tunable) n += static_cast<std::size_t>(p.bits);
    }
    return n;
}

ParamValue decode_value(const HyperparamSpec& p, std::uint64_t code) {
    if (p.bits < 1 || p.bits > 62) throw ContractError(p.name + ": unsupported field width");
    code &= (std::uint64_t{1} << p.bits) - 1;
    if (const auto* r = std::get_if<IntegerRange>(&p.domain)) {
        return scale_code(code, p.bits, r->lo, r->hi);
    }
    if (const auto* c = std::get_if<CategoricalSet>(&p.domain)) {
        return c->values[code % c->values.size()];
    }
    const auto& g = std::get<Log2Grid>(p.domain);
    return std::ldexp(1.0, static_cast<int>(scale_code(code, p.bits, g.lo, g.hi)));
}

std::uint64_t encode_value(const HyperparamSpec& p, const ParamValue& value) {
    if (!p.contains(value)) {
        throw ContractError(p.name + ": cannot encode out-of-domain value " + to_string(value));
    }
    const std::uint64_t codes = std::uint64_t{1} << p.bits;
    for (std::uint64_t v = 0; v < codes; ++v) {
        if (decode_value(p, v) == value) return v;
    }
    throw ContractError(p.name + ": value " + to_string(value) + " is not reachable with " +
                        std::to_string(p.bits) + " bits");
}

Chromosome encode(const AlgorithmSpec& spec, const Config& config) {
    const Config full = spec.complete(config);
    Chromosome c;
    c.bits.assign(chromosome_length(spec), 0);
    std::size_t offset = 0;
    for (const auto& p : spec.hyperparameters) {
        if (!p.tunable) continue;
        write_field(c.bits, offset, p.bits, encode_value(p, full.at(p.name)));
        offset += static_cast<std::size_t>(p.bits);
    }
    return c;
}

Config decode(const AlgorithmSpec& spec, const Chromosome& c) {
    if (c.bits.size() != chromosome_length(spec)) {
        throw ContractError(spec.id + ": chromosome length " + std::to_string(c.bits.size()) +
                            " does not match the tunable layout");
    }
    Config out = spec.default_config;
    std::size_t offset = 0;
    for (const auto& p : spec.hyperparameters) {
        if (!p.tunable) continue;
        out[p.name] = decode_value(p, read_field(c.bits, offset, p.bits));
        offset += static_cast<std::size_t>(p.bits);
    }
    return out;
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t cut) {
    if (a.size() != b.size()) throw ContractError("crossover: parent lengths differ");
    if (cut < 1 || cut >= a.size()) throw ContractError("crossover: cut point out of range");
    Chromosome x{a.bits, std::nullopt};
    Chromosome y{b.bits, std::nullopt};
    std::swap_ranges(x.bits.begin() + static_cast<std::ptrdiff_t>(cut), x.bits.end(),
                     y.bits.begin() + static_cast<std::ptrdiff_t>(cut));
    return {std::move(x), std::move(y)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double prob,
                                            Rng& rng) {
    if (a.size() != b.size()) throw ContractError("crossover: parent lengths differ");
    if (a.size() < 2 || !bernoulli(rng, prob)) return {a, b};
    const auto cut = 1 + static_cast<std::size_t>(uniform_index(rng, a.size() - 1));
    return crossover_at(a, b, cut);
}

Chromosome mutate(const Chromosome& c, double rate, Rng& rng) {
    Chromosome out{c.bits, std::nullopt};
    bool changed = false;
    for (auto& bit : out.bits) {
        if (bernoulli(rng, rate)) {
            bit ^= 1u;
            changed = true;
        }
    }
    if (!changed) out.fitness = c.fitness;
    return out;
}

std::size_t tournament_select(std::span<const double> fitness, std::size_t size, Rng& rng) {
    if (fitness.empty()) throw ContractError("tournament: empty population");
    std::size_t best = static_cast<std::size_t>(uniform_index(rng, fitness.size()));
    for (std::size_t i = 1; i < size; ++i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, fitness.size()));
        if (fitness[j] > fitness[best] || (fitness[j] == fitness[best] && j < best)) best = j;
    }
    return best;
}

GAResult evolve(std::size_t length, const BatchFitness& fitness, const GAParams& params,
                std::span<const Bits> seeds) {
    params.validate();
    if (length == 0) throw ContractError("GA: chromosome length must be positive");
    const double mutation = params.mutation_prob.value_or(1.0 / static_cast<double>(length));

    Rng rng(params.seed);
    std::map<Bits, std::optional<double>> cache;

    std::vector<Bits> population;
    for (const auto& s : seeds) {
        if (population.size() == params.population) break;
        if (s.size() != length) throw ContractError("GA: seed individual has the wrong length");
        population.push_back(s);
    }
    while (population.size() < params.population) {
        Bits b(length);
        for (auto& bit : b) bit = static_cast<std::uint8_t>(rng() >> 63);
        population.push_back(std::move(b));
    }

    GAResult result;
    std::vector<double> scores(population.size());

    // Scores the population through the cache, appending one history row.
    auto assess = [&](std::size_t generation) {
        std::vector<Bits> fresh;
        for (const auto& b : population) {
            if (!cache.contains(b)) {
                cache.emplace(b, std::nullopt);
                fresh.push_back(b);
            }
        }
        if (!fresh.empty()) {
            const auto values = fitness(fresh);
            if (values.size() != fresh.size()) {
                throw ContractError("GA: fitness returned the wrong number of values");
            }
            for (std::size_t i = 0; i < fresh.size(); ++i) cache[fresh[i]] = values[i];
        }
        GenerationStats stats;
        stats.generation = generation;
        for (std::size_t i = 0; i < population.size(); ++i) {
            const auto& v = cache.at(population[i]);
            scores[i] = v.value_or(0.0);
            if (!v) ++stats.failures;
        }
        const auto top = static_cast<std::size_t>(
            std::max_element(scores.begin(), scores.end()) - scores.begin());
        stats.best = scores[top];
        stats.mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                     static_cast<double>(scores.size());
        result.history.push_back(stats);
        return top;
    };

    auto top = assess(0);
    result.best_bits = population[top];
    result.best_fitness = scores[top];

    std::size_t stagnant = 0;
    for (std::size_t g = 1; g <= params.generations; ++g) {
        std::vector<std::size_t> ranked(population.size());
        std::iota(ranked.begin(), ranked.end(), std::size_t{0});
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

        std::vector<Bits> next;
        next.reserve(population.size());
        for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(population[ranked[e]]);
        while (next.size() < population.size()) {
            const auto p1 = tournament_select(scores, params.tournament, rng);
            const auto p2 = tournament_select(scores, params.tournament, rng);
            auto [c1, c2] = crossover(Chromosome{population[p1], std::nullopt},
                                      Chromosome{population[p2], std::nullopt},
                                      params.crossover_prob, rng);
            next.push_back(mutate(c1, mutation, rng).bits);
            if (next.size() < population.size()) next.push_back(mutate(c2, mutation, rng).bits);
        }
        population = std::move(next);

        top = assess(g);
        result.generations_run = g;
        if (scores[top] > result.best_fitness) {
            result.best_fitness = scores[top];
            result.best_bits = population[top];
            stagnant = 0;
        } else if (++stagnant >= params.stagnation_limit && params.stagnation_limit > 0) {
            break;
        }
    }
    result.evaluations = cache.size();
    return result;
}

std::uint64_t evaluation_seed(const GAParams& params) {
    return derive_seed(params.seed, "evaluate");
}

OptimizeResult optimize(const AlgorithmSpec& spec, const Dataset& d, const GAParams& params) {
    params.validate();
    OptimizeResult out;
    out.split_seed = evaluation_seed(params);
    // Fitness evaluations already run in parallel; the models inside stay serial.
    const Exec inner = params.exec == Exec::parallel ? Exec::serial : Exec::parallel;

    if (spec.tunable_count() == 0) {
        out.best_config = spec.default_config;
        out.best_f_score = evaluate(spec, spec.default_config, d, out.split_seed, inner).f_score;
        out.evaluations = 1;
        return out;
    }

    const BatchFitness fitness = [&](std::span<const Bits> genotypes) {
        std::vector<std::optional<double>> values(genotypes.size());
        for_each_index(params.exec, genotypes.size(), [&](std::size_t i) {
            try {
                const Config cfg = decode(spec, Chromosome{genotypes[i], std::nullopt});
                values[i] = evaluate(spec, cfg, d, out.split_seed, inner).f_score;
            } catch (const Error&) {
                values[i] = std::nullopt;
            }
        });
        return values;
    };

    const Bits start = encode(spec, spec.default_config).bits;
    const GAResult ga = evolve(chromosome_length(spec), fitness, params, std::span(&start, 1));
    out.best_config = decode(spec, Chromosome{ga.best_bits, std::nullopt});
    out.best_f_score = ga.best_fitness;
    out.history = ga.history;
    out.generations_run = ga.generations_run;
    out.evaluations = ga.evaluations;
    return out;
}

ScreeningReport screen_hyperparameters(const AlgorithmSpec& spec, std::span<const Dataset> datasets,
                                       double threshold, const GAParams& params) {
    if (datasets.empty()) throw ContractError("screen: empty dataset list");
    if (spec.hyperparameters.empty()) {
        throw ContractError("screen: " + spec.id + " has no hyperparameters");
    }
    ScreeningReport report;
    report.spec = spec;
    for (std::size_t i = 0; i < spec.hyperparameters.size(); ++i) {
        AlgorithmSpec single = spec;
        for (std::size_t j = 0; j < single.hyperparameters.size(); ++j) {
            single.hyperparameters[j].tunable = i == j;
        }
        double total = 0.0;
        for (std::size_t k = 0; k < datasets.size(); ++k) {
            GAParams run = params;
            run.seed = derive_seed(params.seed, static_cast<std::uint64_t>(k));
            const double base =
                evaluate(spec, spec.default_config, datasets[k], evaluation_seed(run)).f_score;
            const double tuned = optimize(single, datasets[k], run).best_f_score;
            total += tuned - base;
        }
        const double improvement = total / static_cast<double>(datasets.size());
        report.improvements.push_back(improvement);
        report.spec.hyperparameters[i].tunable = improvement >= threshold;
    }
    return report;
}

}  // namespace autocash
