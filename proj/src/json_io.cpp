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


#include "autocash/json_io.hpp"

#include <string>
#include <utility>

#include "autocash/errors.hpp"

namespace autocash {

namespace {

// Runs a reader, turning nlohmann type/key errors into DataError.
template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

Json domain_to_json(const Domain& d) {
    if (const auto* r = std::get_if<IntegerRange>(&d)) {
        return {{"kind", "integer"}, {"lo", r->lo}, {"hi", r->hi}};
    }
    if (const auto* c = std::get_if<CategoricalSet>(&d)) {
        return {{"kind", "categorical"}, {"values", c->values}};
    }
    const auto& g = std::get<Log2Grid>(d);
    return {{"kind", "log2"}, {"lo", g.lo}, {"hi", g.hi}};
}

Domain domain_from_json(const Json& j) {
    return guarded("domain", [&]() -> Domain {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "integer") {
            return IntegerRange{j.at("lo").get<std::int64_t>(), j.at("hi").get<std::int64_t>()};
        }
        if (kind == "categorical") {
            return CategoricalSet{j.at("values").get<std::vector<std::string>>()};
        }
        if (kind == "log2") return Log2Grid{j.at("lo").get<int>(), j.at("hi").get<int>()};
        throw DataError("unknown domain kind '" + kind + "'");
    });
}

Json param_value_to_json(const ParamValue& v) {
    return std::visit([](const auto& x) { return Json(x); }, v);
}

ParamValue param_value_from_json(const HyperparamSpec& p, const Json& j) {
    return guarded("hyperparameter value", [&]() -> ParamValue {
        if (std::holds_alternative<IntegerRange>(p.domain)) return j.get<std::int64_t>();
        if (std::holds_alternative<CategoricalSet>(p.domain)) return j.get<std::string>();
        return j.get<double>();
    });
}

Json config_to_json(const Config& c) {
    Json j = Json::object();
    for (const auto& [k, v] : c) j[k] = param_value_to_json(v);
    return j;
}

Config config_from_json(const AlgorithmSpec& spec, const Json& j) {
    if (!j.is_object()) throw DataError("configuration must be a JSON object");
    Config c;
    for (const auto& [k, v] : j.items()) {
        const auto* p = [&]() -> const HyperparamSpec* {
            for (const auto& h : spec.hyperparameters) {
                if (h.name == k) return &h;
            }
            return nullptr;
        }();
        if (!p) throw DataError(spec.id + ": unknown hyperparameter '" + k + "'");
        c[k] = param_value_from_json(*p, v);
    }
    return c;
}

Json algorithm_to_json(const AlgorithmSpec& spec) {
    Json params = Json::array();
    for (const auto& p : spec.hyperparameters) {
        params.push_back({{"name", p.name},
                          {"domain", domain_to_json(p.domain)},
                          {"bits", p.bits},
                          {"tunable", p.tunable}});
    }
    return {{"id", spec.id}, {"hyperparameters", params}, {"default", config_to_json(spec.default_config)}};
}

AlgorithmSpec algorithm_from_json(const Json& j) {
    return guarded("algorithm", [&] {
        AlgorithmSpec spec;
        spec.id = j.at("id").get<std::string>();
        for (const auto& p : j.at("hyperparameters")) {
            spec.hyperparameters.push_back({p.at("name").get<std::string>(),
                                            domain_from_json(p.at("domain")), p.at("bits").get<int>(),
                                            p.at("tunable").get<bool>()});
        }
        spec.default_config = config_from_json(spec, j.at("default"));
        return spec;
    });
}

Json portfolio_to_json(const Portfolio& p) {
    Json algs = Json::array();
    for (const auto& a : p.algorithms()) algs.push_back(algorithm_to_json(a));
    return {{"algorithms", algs}};
}

Portfolio portfolio_from_json(const Json& j) {
    return guarded("portfolio", [&] {
        std::vector<AlgorithmSpec> algs;
        for (const auto& a : j.at("algorithms")) algs.push_back(algorithm_from_json(a));
        return Portfolio(std::move(algs));
    });
}

Json tunable_flags_to_json(const Portfolio& p) {
    Json j = Json::object();
    for (const auto& a : p.algorithms()) {
        Json flags = Json::object();
        for (const auto& h : a.hyperparameters) flags[h.name] = h.tunable;
        j[a.id] = flags;
    }
    return j;
}

void apply_tunable_flags(Portfolio& p, const Json& flags) {
    if (!flags.is_object()) throw DataError("tunable flags must be a JSON object");
    for (const auto& [alg, params] : flags.items()) {
        if (!p.contains(alg)) throw DataError("tunable flags: unknown algorithm '" + alg + "'");
        if (!params.is_object()) throw DataError("tunable flags for '" + alg + "' must be an object");
        for (const auto& [name, value] : params.items()) {
            if (!value.is_boolean()) throw DataError("tunable flag " + alg + "." + name + " must be a boolean");
            try {
                p.set_tunable(alg, name, value.get<bool>());
            } catch (const ContractError& e) {
                throw DataError(e.what());
            }
        }
    }
}

Json outcome_to_json(const EvaluationOutcome& o) {
    return {{"accuracy", o.accuracy}, {"auc", o.auc}, {"f_score", o.f_score}};
}

Json history_to_json(std::span<const GenerationStats> history) {
    Json j = Json::array();
    for (const auto& g : history) {
        j.push_back({{"generation", g.generation},
                     {"best", g.best},
                     {"mean", g.mean},
                     {"failures", g.failures}});
    }
    return j;
}

Json meta_features_to_json(const MetaFeatureVector& v) { return Json(v.values); }

MetaFeatureVector meta_features_from_json(const Json& j) {
    return guarded("meta-feature vector", [&] {
        if (!j.is_array() || j.size() != kMetaFeatureCount) {
            throw DataError("meta-feature vector must hold " + std::to_string(kMetaFeatureCount) +
                            " numbers");
        }
        MetaFeatureVector v;
        for (std::size_t i = 0; i < kMetaFeatureCount; ++i) v.values[i] = j[i].get<double>();
        return v;
    });
}

Json feature_list_to_json(const MetaFeatureList& m) { return Json(m.indices()); }

MetaFeatureList feature_list_from_json(const Json& j) {
    return guarded("feature list", [&] {
        try {
            return MetaFeatureList(j.get<std::vector<int>>());
        } catch (const ContractError& e) {
            throw DataError(e.what());
        }
    });
}

Json labels_to_json(std::span<const LabelResult> labels, const Portfolio& p) {
    Json j = Json::array();
    for (const auto& l : labels) {
        Json scores = Json::object();
        for (std::size_t a = 0; a < l.f_scores.size(); ++a) {
            scores[p.algorithms()[a].id] = l.f_scores[a] < 0.0 ? Json(nullptr) : Json(l.f_scores[a]);
        }
        j.push_back({{"dataset", l.dataset}, {"algorithm", l.algorithm}, {"f_scores", scores}});
    }
    return j;
}

Json meta_dataset_to_json(const MetaDataset& md) {
    Json rows = Json::array();
    for (const auto& r : md.rows) {
        rows.push_back({{"dataset", r.dataset},
                        {"features", meta_features_to_json(r.features)},
                        {"label", r.label}});
    }
    return {{"rows", rows}};
}

MetaDataset meta_dataset_from_json(const Json& j) {
    return guarded("meta-dataset", [&] {
        MetaDataset md;
        for (const auto& r : j.at("rows")) {
            md.rows.push_back({r.at("dataset").get<std::string>(),
                               meta_features_from_json(r.at("features")),
                               r.at("label").get<std::string>()});
        }
        return md;
    });
}

Json reward_table_to_json(const RewardTable& t) { return {{"rewards", t.rewards}}; }

RewardTable reward_table_from_json(const Json& j) {
    return guarded("reward table", [&] {
        const auto& r = j.at("rewards");
        if (!r.is_array() || r.size() != kMetaFeatureCount) {
            throw DataError("reward table must hold " + std::to_string(kMetaFeatureCount) + " numbers");
        }
        RewardTable t;
        for (std::size_t i = 0; i < kMetaFeatureCount; ++i) {
            t.rewards[i] = r[i].get<double>();
            if (!(t.rewards[i] >= 0.0 && t.rewards[i] <= 1.0)) {
                throw DataError("reward " + std::to_string(i) + " outside [0, 1]");
            }
        }
        return t;
    });
}

Json forest_to_json(const Forest& f) {
    Json trees = Json::array();
    for (const auto& t : f.trees()) {
        Json nodes = Json::array();
        for (const auto& n : t.nodes()) {
            nodes.push_back(Json::array({n.feature, n.threshold, n.categorical, n.left, n.right, n.leaf}));
        }
        trees.push_back({{"classes", t.classes()},
                         {"arity", t.arity()},
                         {"nodes", nodes},
                         {"distributions", t.distributions()}});
    }
    return {{"features", feature_list_to_json(f.features())}, {"labels", f.labels()}, {"trees", trees}};
}

Forest forest_from_json(const Json& j) {
    return guarded("forest", [&] {
        std::vector<cart::Tree> trees;
        for (const auto& t : j.at("trees")) {
            std::vector<cart::Node> nodes;
            for (const auto& n : t.at("nodes")) {
                if (!n.is_array() || n.size() != 6) throw DataError("forest: malformed node");
                cart::Node node;
                node.feature = n[0].get<int>();
                node.threshold = n[1].get<double>();
                node.categorical = n[2].get<bool>();
                node.left = n[3].get<int>();
                node.right = n[4].get<int>();
                node.leaf = n[5].get<std::uint32_t>();
                nodes.push_back(node);
            }
            trees.emplace_back(std::move(nodes), t.at("distributions").get<std::vector<double>>(),
                               t.at("classes").get<std::size_t>(), t.at("arity").get<std::size_t>());
        }
        return Forest(std::move(trees), j.at("labels").get<std::vector<std::string>>(),
                      feature_list_from_json(j.at("features")));
    });
}

}  // namespace autocash
