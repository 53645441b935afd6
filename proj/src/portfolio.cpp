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

#include "autocash/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "autocash/errors.hpp"
#include "autocash/json_io.hpp"
#include "autocash/random.hpp"

namespace autocash {

namespace {

HyperparamSpec make_param(std::string name, Domain domain) {
    HyperparamSpec p;
    p.name = std::move(name);
    p.bits = bits_for(domain);
    p.domain = std::move(domain);
    return p;
}

AlgorithmSpec make_spec(std::string id, std::vector<HyperparamSpec> params, Config defaults) {
    AlgorithmSpec spec{std::move(id), std::move(params), std::move(defaults)};
    for (const auto& p : spec.hyperparameters) {
        const auto it = spec.default_config.find(p.name);
        if (it == spec.default_config.end() || !p.contains(it->second)) {
            throw ContractError(spec.id + ": default for '" + p.name + "' outside its domain");
        }
    }
    return spec;
}

// True when v is exactly 2^e for some integer e in [lo, hi].
bool is_power_of_two_in(double v, int lo, int hi) {
    if (!(v > 0.0) || !std::isfinite(v)) return false;
    int exp = 0;
    const double mant = std::frexp(v, &exp);
    return mant == 0.5 && exp - 1 >= lo && exp - 1 <= hi;
}

}  // namespace

std::string to_string(const ParamValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using V = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<V, std::string>) {
                return x;
            } else if constexpr (std::is_same_v<V, double>) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", x);
                return buf;
            } else {
                return std::to_string(x);
            }
        },
        v);
}

std::size_t HyperparamSpec::cardinality() const {
    return std::visit(
        [](const auto& d) -> std::size_t {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, IntegerRange>) {
                return static_cast<std::size_t>(d.hi - d.lo + 1);
            } else if constexpr (std::is_same_v<D, CategoricalSet>) {
                return d.values.size();
            } else {
                return static_cast<std::size_t>(d.hi - d.lo + 1);
            }
        },
        domain);
}

bool HyperparamSpec::contains(const ParamValue& v) const {
    if (const auto* r = std::get_if<IntegerRange>(&domain)) {
        const auto* x = std::get_if<std::int64_t>(&v);
        return x && *x >= r->lo && *x <= r->hi;
    }
    if (const auto* c = std::get_if<CategoricalSet>(&domain)) {
        const auto* x = std::get_if<std::string>(&v);
        return x && std::find(c->values.begin(), c->values.end(), *x) != c->values.end();
    }
    const auto& g = std::get<Log2Grid>(domain);
    const auto* x = std::get_if<double>(&v);
    return x && is_power_of_two_in(*x, g.lo, g.hi);
}

int bits_for(const Domain& domain) {
    std::size_t count = std::visit(
        [](const auto& d) -> std::size_t {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, CategoricalSet>) {
                return d.values.size();
            } else {
                return static_cast<std::size_t>(d.hi - d.lo + 1);
            }
        },
        domain);
    int bits = 1;
    while ((std::size_t{1} << bits) < count) ++bits;
    return bits;
}

const HyperparamSpec& AlgorithmSpec::hyperparameter(const std::string& name) const {
    for (const auto& p : hyperparameters) {
        if (p.name == name) return p;
    }
    throw ContractError(id + ": unknown hyperparameter '" + name + "'");
}

std::size_t AlgorithmSpec::tunable_count() const {
    return static_cast<std::size_t>(std::count_if(
        hyperparameters.begin(), hyperparameters.end(), [](const auto& p) { return p.tunable; }));
}

Config AlgorithmSpec::complete(const Config& partial) const {
    Config out = default_config;
    for (const auto& [name, value] : partial) {
        const auto& p = hyperparameter(name);
        if (!p.contains(value)) {
            throw ContractError(id + ": value " + to_string(value) + " outside the domain of '" +
                                name + "'");
        }
        out[name] = value;
    }
    return out;
}

std::vector<AlgorithmSpec> list_algorithms() {
    namespace ids = algorithm_ids;
    std::vector<AlgorithmSpec> out;
    out.push_back(make_spec(ids::kMajority, {}, {}));
    out.push_back(make_spec(ids::kKnn,
                            {make_param("k", IntegerRange{1, 32}),
                             make_param("weighting", CategoricalSet{{"uniform", "inverse-distance"}})},
                            {{"k", std::int64_t{5}}, {"weighting", std::string("uniform")}}));
    out.push_back(make_spec(ids::kDecisionTree,
                            {make_param("max_depth", IntegerRange{1, 32}),
                             make_param("min_split", IntegerRange{2, 32})},
                            {{"max_depth", std::int64_t{10}}, {"min_split", std::int64_t{2}}}));
    out.push_back(make_spec(ids::kRandomForest,
                            {make_param("trees", IntegerRange{10, 200}),
                             make_param("max_depth", IntegerRange{1, 32})},
                            {{"trees", std::int64_t{100}}, {"max_depth", std::int64_t{32}}}));
    out.push_back(make_spec(ids::kNaiveBayes,
                            {make_param("var_smoothing_exp", IntegerRange{-12, -3})},
                            {{"var_smoothing_exp", std::int64_t{-9}}}));
    out.push_back(make_spec(ids::kLogistic, {make_param("l2", Log2Grid{-10, 4})},
                            {{"l2", 1.0}}));
    return out;
}

Portfolio::Portfolio(std::vector<AlgorithmSpec> algorithms) : algorithms_(std::move(algorithms)) {
    std::set<std::string> seen;
    for (const auto& a : algorithms_) {
        if (!seen.insert(a.id).second) throw ContractError("duplicate algorithm id '" + a.id + "'");
    }
}

const AlgorithmSpec& Portfolio::at(const std::string& id) const {
    return algorithms_[index_of(id)];
}

bool Portfolio::contains(const std::string& id) const {
    return std::any_of(algorithms_.begin(), algorithms_.end(),
                       [&](const auto& a) { return a.id == id; });
}

std::size_t Portfolio::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < algorithms_.size(); ++i) {
        if (algorithms_[i].id == id) return i;
    }
    throw ContractError("unknown algorithm '" + id + "'");
}

void Portfolio::set_tunable(const std::string& id, const std::string& param, bool tunable) {
    auto& spec = algorithms_[index_of(id)];
    for (auto& p : spec.hyperparameters) {
        if (p.name == param) {
            p.tunable = tunable;
            return;
        }
    }
    throw ContractError(id + ": unknown hyperparameter '" + param + "'");
}

void Portfolio::replace(const AlgorithmSpec& spec) { algorithms_[index_of(spec.id)] = spec; }

std::string Portfolio::fingerprint() const {
    const std::uint64_t h = fnv1a64(portfolio_to_json(*this).dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace autocash
