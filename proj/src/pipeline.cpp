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


#include "autocash/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <zlib.h>

#include "autocash/errors.hpp"
#include "autocash/random.hpp"

namespace autocash {

namespace {

// Runs one stage, prefixing its errors with the stage name.
template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const DataError& e) {
        throw DataError(std::string(name) + ": " + e.what());
    } catch (const ContractError& e) {
        throw ContractError(std::string(name) + ": " + e.what());
    }
}

std::uint32_t crc32_of(const std::string& s) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

}  // namespace

StageSeeds StageSeeds::from_root(std::uint64_t root) {
    return {derive_seed(root, "impute"), derive_seed(root, "label"), derive_seed(root, "rewards"),
            derive_seed(root, "dqn"), derive_seed(root, "forest")};
}

std::vector<Dataset> load_corpus(const std::filesystem::path& dir, const CsvOptions& csv) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw DataError(dir.string() + ": not a directory");

    std::map<std::string, std::string> targets;
    const fs::path manifest = dir / "manifest.json";
    if (fs::exists(manifest)) {
        std::ifstream in(manifest);
        try {
            const Json j = Json::parse(in);
            for (const auto& [file, column] : j.items()) targets[file] = column.get<std::string>();
        } catch (const Json::exception& e) {
            throw DataError(manifest.string() + ": " + e.what());
        }
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError(dir.string() + ": no CSV files");

    std::vector<Dataset> out;
    for (const auto& f : files) {
        const auto it = targets.find(f.filename().string());
        const TargetSpec target = it == targets.end() ? TargetSpec{kLastColumn} : TargetSpec{it->second};
        out.push_back(load_csv(f, target, csv));
    }
    return out;
}

std::vector<Dataset> impute_all(const std::vector<Dataset>& datasets, std::uint64_t seed) {
    std::vector<Dataset> out;
    out.reserve(datasets.size());
    for (std::size_t k = 0; k < datasets.size(); ++k) {
        out.push_back(impute_missing(datasets[k], derive_seed(seed, static_cast<std::uint64_t>(k))));
    }
    return out;
}

RewardOptions reward_options(const TrainParams& params, std::uint64_t seed) {
    RewardOptions o;
    o.repeats = params.reward_repeats;
    o.folds = params.folds;
    o.seed = seed;
    o.forest = params.forest;
    o.forest.trees = params.reward_trees;
    o.exec = params.exec;
    return o;
}

MaskScorer pipeline_scorer(const MetaDataset& md, const TrainParams& params, std::uint64_t seed) {
    return cv_scorer(md, params.forest, params.folds, derive_seed(seed, "score"));
}

TrainOutputs train_pipeline(const std::vector<Dataset>& datasets, const Portfolio& portfolio,
                            const TrainParams& params, const StageInputs& reuse) {
    const StageSeeds seeds = StageSeeds::from_root(params.seed);
    TrainOutputs out;

    if (reuse.meta) {
        out.meta = *reuse.meta;
    } else {
        const auto imputed = stage("impute", [&] { return impute_all(datasets, seeds.impute); });
        out.labels = stage("label", [&] {
            return label_optimal(imputed, portfolio, seeds.label, params.exec);
        });
        out.meta = stage("meta-dataset", [&] { return build_meta_dataset(imputed, out.labels); });
    }
    for (const auto& row : out.meta.rows) {
        if (!portfolio.contains(row.label)) {
            throw DataError("meta-dataset: label '" + row.label + "' of " + row.dataset +
                            " is not in the portfolio");
        }
    }

    if (reuse.rewards) {
        out.rewards = *reuse.rewards;
    } else {
        out.rewards = stage("rewards", [&] {
            return estimate_rewards(out.meta, reward_options(params, seeds.rewards)).table;
        });
    }

    if (reuse.m_list) {
        out.selection.selected = *reuse.m_list;
    } else {
        out.selection = stage("select-features", [&] {
            DQNParams dqn = params.dqn;
            dqn.seed = seeds.dqn;
            dqn.exec = params.exec;
            return train_dqn(out.rewards, pipeline_scorer(out.meta, params, seeds.dqn), dqn);
        });
    }

    ForestParams fp = params.forest;
    fp.seed = seeds.forest;
    fp.exec = params.exec;
    Forest forest = stage("forest", [&] { return train_rf(out.meta, out.selection.selected, fp); });

    Json names = Json::array();
    for (const auto& r : out.meta.rows) names.push_back(r.dataset);
    Json provenance = {
        {"root_seed", params.seed},
        {"stage_seeds",
         {{"impute", seeds.impute},
          {"label", seeds.label},
          {"rewards", seeds.rewards},
          {"dqn", seeds.dqn},
          {"forest", seeds.forest}}},
        {"datasets", names},
        {"reward_repeats", params.reward_repeats},
        {"reward_trees", params.reward_trees},
        {"folds", params.folds},
        {"episodes", params.dqn.episodes},
        {"trees", params.forest.trees},
        {"max_depth", params.forest.max_depth},
        {"reused", {{"meta", reuse.meta.has_value()},
                    {"rewards", reuse.rewards.has_value()},
                    {"m_list", reuse.m_list.has_value()}}},
    };

    out.artifact.m_list = out.selection.selected;
    out.artifact.forest = std::move(forest);
    out.artifact.portfolio_fingerprint = portfolio.fingerprint();
    out.artifact.provenance = std::move(provenance);
    return out;
}

std::string artifact_to_string(const ModelArtifact& a) {
    const Json body = {{"m_list", feature_list_to_json(a.m_list)},
                       {"forest", forest_to_json(a.forest)},
                       {"portfolio_fingerprint", a.portfolio_fingerprint},
                       {"provenance", a.provenance}};
    const std::string canonical = body.dump();
    nlohmann::ordered_json doc;
    doc["version"] = a.version;
    doc["body"] = body;
    doc["crc32"] = crc32_of(canonical);
    return doc.dump() + "\n";
}

ModelArtifact artifact_from_string(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception&) {
        throw DataError("artifact checksum error: file is truncated or corrupted");
    }
    if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer()) {
        throw DataError("artifact checksum error: missing version field");
    }
    const int version = doc["version"].get<int>();
    if (version != kArtifactVersion) {
        throw DataError("unsupported version " + std::to_string(version) + " (expected " +
                        std::to_string(kArtifactVersion) + ")");
    }
    if (!doc.contains("body") || !doc.contains("crc32") || !doc["crc32"].is_number_unsigned() ||
        crc32_of(doc["body"].dump()) != doc["crc32"].get<std::uint32_t>()) {
        throw DataError("artifact checksum error: CRC32 mismatch");
    }
    const Json& body = doc["body"];
    ModelArtifact a;
    a.version = version;
    try {
        a.m_list = feature_list_from_json(body.at("m_list"));
        a.forest = forest_from_json(body.at("forest"));
        a.portfolio_fingerprint = body.at("portfolio_fingerprint").get<std::string>();
        a.provenance = body.at("provenance");
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed artifact: ") + e.what());
    }
    if (a.forest.features() != a.m_list) throw DataError("artifact: forest features differ from M_list");
    return a;
}

void save_artifact(const ModelArtifact& a, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << artifact_to_string(a);
    if (!out) throw DataError(path.string() + ": write failed");
}

ModelArtifact load_artifact(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": file not found or unreadable");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return artifact_from_string(buffer.str());
}

Recommendation recommend(const ModelArtifact& artifact, const Portfolio& portfolio,
                         const Dataset& d, const GAParams& ga) {
    if (artifact.portfolio_fingerprint != portfolio.fingerprint()) {
        throw DataError("portfolio fingerprint mismatch: artifact " + artifact.portfolio_fingerprint +
                        ", live " + portfolio.fingerprint());
    }
    const Dataset imputed = impute_missing(d, derive_seed(ga.seed, "impute"));
    const MetaFeatureVector v = compute_all(imputed);

    Recommendation r;
    r.algorithm = artifact.forest.predict(v);
    if (!portfolio.contains(r.algorithm)) {
        throw DataError("artifact predicts '" + r.algorithm + "', which is not in the portfolio");
    }
    const AlgorithmSpec& spec = portfolio.at(r.algorithm);
    r.search = optimize(spec, imputed, ga);
    r.config = r.search.best_config;
    r.outcome = evaluate(spec, r.config, imputed, r.search.split_seed);
    r.default_outcome = evaluate(spec, spec.default_config, imputed, r.search.split_seed);
    return r;
}

}  // namespace autocash
