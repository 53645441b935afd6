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


// Command-line front end: each subcommand writes one JSON document to stdout
// or to --out. Exit status 0 on success, 1 on usage errors, 2 on data errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "autocash/errors.hpp"
#include "autocash/ga.hpp"
#include "autocash/json_io.hpp"
#include "autocash/metafeatures.hpp"
#include "autocash/pipeline.hpp"

namespace {

using namespace autocash;

struct Globals {
    std::uint64_t seed = 0;
    std::string missing_token = "?";
    std::string delimiter = ",";
    std::string out;
    std::string portfolio_flags;

    CsvOptions csv() const {
        if (delimiter.size() != 1) throw ContractError("--delimiter must be a single character");
        return {delimiter[0], missing_token};
    }

    Portfolio portfolio() const {
        Portfolio p = Portfolio::standard();
        if (!portfolio_flags.empty()) apply_tunable_flags(p, read_json(portfolio_flags));
        return p;
    }

    static Json read_json(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError(path + ": file not found or unreadable");
        try {
            return Json::parse(in);
        } catch (const Json::exception& e) {
            throw DataError(path + ": " + e.what());
        }
    }

    void emit(const std::string& text) const {
        if (out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f) throw DataError(out + ": cannot open for writing");
        f << text;
    }
    void emit(const Json& j) const { emit(j.dump(2) + "\n"); }
};

Dataset load_dataset(const Globals& g, const std::string& path, const std::string& target) {
    const TargetSpec spec = target.empty() ? TargetSpec{kLastColumn} : parse_target(target);
    return load_csv(path, spec, g.csv());
}

GAParams ga_params(const Globals& g, std::size_t generations, std::size_t population) {
    GAParams p;
    p.seed = derive_seed(g.seed, "ga");
    p.generations = generations;
    p.population = population;
    return p;
}

Json optimize_json(const std::string& dataset, const std::string& alg, const OptimizeResult& r,
                   const EvaluationOutcome& tuned, const EvaluationOutcome& base) {
    return {{"dataset", dataset},
            {"algorithm", alg},
            {"config", config_to_json(r.best_config)},
            {"outcome", outcome_to_json(tuned)},
            {"default_outcome", outcome_to_json(base)},
            {"generations_run", r.generations_run},
            {"evaluations", r.evaluations},
            {"history", history_to_json(r.history)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"autocash: algorithm selection and hyperparameter tuning for tabular data"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Root seed")->envname("AUTOCASH_SEED");
    app.add_option("--missing-token", g.missing_token, "Token marking a missing CSV cell");
    app.add_option("--delimiter", g.delimiter, "CSV field delimiter");
    app.add_option("--out", g.out, "Write output here instead of stdout");
    app.add_option("--portfolio", g.portfolio_flags, "Tunable-flag JSON from the screen command");

    TrainParams train;
    std::string data, target, data_dir, meta_path, rewards_path, mlist_path, model_path, alg;
    std::size_t generations = 50, population = 20;
    double threshold = kDefaultScreeningThreshold;

    auto* portfolio_cmd = app.add_subcommand("portfolio", "Print the algorithm portfolio");

    auto* extract = app.add_subcommand("extract", "Compute the 23 meta-features of a CSV");
    extract->add_option("--data", data, "CSV file")->required();
    extract->add_option("--target", target, "Target column name or index (default: last)");

    auto* evalp = app.add_subcommand("evaluate-portfolio", "Label a corpus and build the meta-dataset");
    evalp->add_option("--data-dir", data_dir, "Corpus directory")->required();

    auto* rewards = app.add_subcommand("rewards", "Estimate per-meta-feature rewards");
    rewards->add_option("--meta", meta_path, "Meta-dataset JSON")->required();
    rewards->add_option("--repeats", train.reward_repeats, "Subsets per batch size");

    auto* select = app.add_subcommand("select-features", "Train the DQN selector");
    select->add_option("--meta", meta_path, "Meta-dataset JSON")->required();
    select->add_option("--rewards", rewards_path, "Reward table JSON")->required();
    select->add_option("--episodes", train.dqn.episodes, "Training episodes");

    auto* train_cmd = app.add_subcommand("train", "Run the whole training pipeline");
    train_cmd->add_option("--data-dir", data_dir, "Corpus directory")->required();
    train_cmd->add_option("--meta", meta_path, "Reuse a meta-dataset JSON");
    train_cmd->add_option("--rewards", rewards_path, "Reuse a reward table JSON");
    train_cmd->add_option("--mlist", mlist_path, "Reuse a selected feature list JSON");
    train_cmd->add_option("--repeats", train.reward_repeats, "Reward subsets per batch size");
    train_cmd->add_option("--episodes", train.dqn.episodes, "DQN training episodes");

    auto* screen = app.add_subcommand("screen", "Decide which hyperparameters stay tunable");
    screen->add_option("--alg", alg, "Algorithm id")->required();
    screen->add_option("--data-dir", data_dir, "Corpus directory")->required();
    screen->add_option("--threshold", threshold, "Minimum mean improvement");

    auto* rec = app.add_subcommand("recommend", "Recommend and tune an algorithm for a CSV");
    rec->add_option("--model", model_path, "Model artifact")->required();
    rec->add_option("--data", data, "CSV file")->required();
    rec->add_option("--target", target, "Target column name or index (default: last)");

    auto* opt = app.add_subcommand("optimize", "Tune one algorithm on a CSV");
    opt->add_option("--alg", alg, "Algorithm id")->required();
    opt->add_option("--data", data, "CSV file")->required();
    opt->add_option("--target", target, "Target column name or index (default: last)");

    for (auto* cmd : {screen, rec, opt}) {
        cmd->add_option("--generations", generations, "GA generation cap");
        cmd->add_option("--population", population, "GA population size");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const Portfolio portfolio = g.portfolio();
        const StageSeeds seeds = StageSeeds::from_root(g.seed);
        train.seed = g.seed;

        if (*portfolio_cmd) {
            Json j = portfolio_to_json(portfolio);
            j["fingerprint"] = portfolio.fingerprint();
            g.emit(j);
        } else if (*extract) {
            const Dataset d = load_dataset(g, data, target);
            const auto v = compute_all(impute_missing(d, seeds.impute));
            Json labels = Json::array();
            for (std::size_t i = 0; i < kMetaFeatureCount; ++i) {
                labels.push_back(std::string(meta_feature_label(i)));
            }
            g.emit(Json{{"dataset", d.name()},
                        {"rows", d.row_count()},
                        {"meta_features", meta_features_to_json(v)},
                        {"labels", labels}});
        } else if (*evalp) {
            const auto imputed = impute_all(load_corpus(data_dir, g.csv()), seeds.impute);
            const auto labels = label_optimal(imputed, portfolio, seeds.label);
            Json j = meta_dataset_to_json(build_meta_dataset(imputed, labels));
            j["labels"] = labels_to_json(labels, portfolio);
            g.emit(j);
        } else if (*rewards) {
            const auto md = meta_dataset_from_json(Globals::read_json(meta_path));
            const auto est = estimate_rewards(md, reward_options(train, seeds.rewards));
            Json j = reward_table_to_json(est.table);
            j["subsets_per_feature"] = est.subsets_per_feature;
            g.emit(j);
        } else if (*select) {
            const auto md = meta_dataset_from_json(Globals::read_json(meta_path));
            const auto table = reward_table_from_json(Globals::read_json(rewards_path));
            DQNParams dqn = train.dqn;
            dqn.seed = seeds.dqn;
            g.emit(feature_list_to_json(train_dqn(table, pipeline_scorer(md, train, seeds.dqn), dqn).selected));
        } else if (*train_cmd) {
            StageInputs reuse;
            if (!meta_path.empty()) reuse.meta = meta_dataset_from_json(Globals::read_json(meta_path));
            if (!rewards_path.empty()) reuse.rewards = reward_table_from_json(Globals::read_json(rewards_path));
            if (!mlist_path.empty()) reuse.m_list = feature_list_from_json(Globals::read_json(mlist_path));
            std::vector<Dataset> corpus;
            if (!reuse.meta) corpus = load_corpus(data_dir, g.csv());
            const auto outputs = train_pipeline(corpus, portfolio, train, reuse);
            g.emit(artifact_to_string(outputs.artifact));
        } else if (*screen) {
            const auto corpus = impute_all(load_corpus(data_dir, g.csv()), seeds.impute);
            const auto report = screen_hyperparameters(portfolio.at(alg), corpus, threshold,
                                                       ga_params(g, generations, population));
            Portfolio updated = portfolio;
            updated.replace(report.spec);
            Json improvements = Json::object();
            for (std::size_t i = 0; i < report.improvements.size(); ++i) {
                improvements[report.spec.hyperparameters[i].name] = report.improvements[i];
            }
            Json flags = tunable_flags_to_json(updated);
            std::cerr << "improvements: " << improvements.dump() << "\n";
            g.emit(flags);
        } else if (*rec) {
            const ModelArtifact artifact = load_artifact(model_path);
            const Dataset d = load_dataset(g, data, target);
            const auto r = recommend(artifact, portfolio, d, ga_params(g, generations, population));
            g.emit(optimize_json(d.name(), r.algorithm, r.search, r.outcome, r.default_outcome));
        } else if (*opt) {
            const AlgorithmSpec& spec = portfolio.at(alg);
            const Dataset d = impute_missing(load_dataset(g, data, target), seeds.impute);
            const GAParams p = ga_params(g, generations, population);
            const auto r = optimize(spec, d, p);
            g.emit(optimize_json(d.name(), alg, r, evaluate(spec, r.best_config, d, r.split_seed),
                                 evaluate(spec, spec.default_config, d, r.split_seed)));
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
