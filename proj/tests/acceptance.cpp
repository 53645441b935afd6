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


// Acceptance run: each criterion prints one PASS/FAIL line; the exit status
// is nonzero when any fails. Usage: acceptance <data-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "autocash/dqn.hpp"
#include "autocash/errors.hpp"
#include "autocash/ga.hpp"
#include "autocash/meta_learner.hpp"
#include "autocash/metafeatures.hpp"
#include "autocash/metrics.hpp"
#include "autocash/pipeline.hpp"
#include "autocash/random.hpp"

using namespace autocash;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool ok = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// ---- 1: metric oracles ----

// ROC curve by sweeping thresholds from high to low, integrated with
// trapezoids; tied scores move diagonally.
double trapezoid_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
    double pos = 0, neg = 0;
    for (int l : labels) (l == 1 ? pos : neg) += 1;
    double tp = 0, fp = 0, area = 0;
    for (std::size_t i = 0; i < order.size();) {
        double dtp = 0, dfp = 0;
        std::size_t j = i;
        for (; j < order.size() && scores[order[j]] == scores[order[i]]; ++j) {
            (labels[order[j]] == 1 ? dtp : dfp) += 1;
        }
        area += (dfp / neg) * (tp + tp + dtp) / (2 * pos);
        tp += dtp;
        fp += dfp;
        i = j;
    }
    return area;
}

Verdict metric_oracles() {
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 199);
        std::vector<int> labels(n);
        std::vector<double> scores(n);
        // coarse scores on half the instances so ties are common
        const bool coarse = trial % 2 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = uniform01(rng) < 0.4 ? 1 : 0;
            scores[i] = coarse ? static_cast<double>(uniform_index(rng, 6)) / 5.0 : uniform01(rng);
        }
        labels[0] = 1;
        labels[1] = 0;
        worst = std::max(worst, std::abs(auc_binary(labels, scores) - trapezoid_auc(labels, scores)));
    }
    Verdict v;
    v.ok = worst <= 1e-9;
    for (int k : {2, 4, 8}) {
        const std::vector<double> p(static_cast<std::size_t>(k), 1.0 / k);
        v.ok = v.ok && entropy(p) == std::log2(static_cast<double>(k));
    }
    const double cancer = f_score(0.99, 0.5);
    v.ok = v.ok && std::abs(cancer - 0.495) < 1e-15;
    v.detail = fmt("max |rank - trapezoid| = %.2e, f(0.99, 0.5) = %.6f", worst, cancer);
    return v;
}

// ---- 2: GA convergence ----

Verdict ga_convergence() {
    const std::size_t length = 32;
    const BatchFitness onemax = [](std::span<const Bits> g) {
        std::vector<std::optional<double>> out;
        for (const auto& b : g) out.emplace_back(static_cast<double>(std::count(b.begin(), b.end(), 1)));
        return out;
    };
    auto run = [&](std::size_t stagnation, int& solved, int& monotone) {
        solved = monotone = 0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            GAParams p;
            p.population = 20;
            p.generations = 50;
            p.stagnation_limit = stagnation;
            p.seed = derive_seed(2026, s);
            const auto r = evolve(length, onemax, p);
            solved += r.best_fitness == static_cast<double>(length);
            bool mono = true;
            for (std::size_t i = 1; i < r.history.size(); ++i) mono = mono && r.history[i].best >= r.history[i - 1].best;
            monotone += mono;
        }
    };
    int solved = 0, monotone = 0, early_solved = 0, early_monotone = 0;
    run(0, solved, monotone);
    run(GAParams{}.stagnation_limit, early_solved, early_monotone);
    Verdict v;
    v.ok = solved >= 95 && monotone == 100 && early_monotone == 100;
    v.detail = fmt("optimum in %.0f/100 runs, monotone best in %.0f/100", solved, monotone) +
               fmt("; with the default stagnation stop %.0f/100 reach it", early_solved);
    return v;
}

// ---- 3: HPO dominance ----

Verdict hpo_dominance(const fs::path& data) {
    // same imputation the pipeline applies before any evaluation
    const auto datasets = impute_all(load_corpus(data / "small"), 78);
    const auto portfolio = Portfolio::standard();
    int runs = 0, dominated = 0;
    double min_gain = 1e9;
    std::uint64_t k = 0;
    for (const auto& d : datasets) {
        for (const auto& spec : portfolio.algorithms()) {
            GAParams p;
            p.seed = derive_seed(77, k++);
            const auto r = optimize(spec, d, p);
            const double def = evaluate(spec, spec.default_config, d, r.split_seed).f_score;
            ++runs;
            dominated += r.best_f_score >= def;
            min_gain = std::min(min_gain, r.best_f_score - def);
        }
    }
    Verdict v;
    v.ok = runs == static_cast<int>(datasets.size() * portfolio.algorithms().size()) && datasets.size() == 5 &&
           dominated == runs;
    v.detail = fmt("%.0f/%.0f tuned >= default, smallest gain %.4f", dominated, runs, min_gain);
    return v;
}

// ---- 4: DQN subset oracle ----

Verdict dqn_oracle() {
    int hits = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(derive_seed(404, s));
        RewardTable r;
        r.rewards.fill(0.1);
        std::uint32_t top = 0;
        while (std::popcount(top) < 3) top |= std::uint32_t{1} << uniform_index(rng, 23);
        for (std::size_t i = 0; i < 23; ++i)
            if (top >> i & 1u) r.rewards[i] = 0.9;
        const auto score = additive_scorer(r);
        // brute force over all 3-subsets
        double best = -1.0;
        std::uint32_t oracle = 0;
        for (int a = 0; a < 23; ++a)
            for (int b = a + 1; b < 23; ++b)
                for (int c = b + 1; c < 23; ++c) {
                    const double v = score(MetaFeatureList({a, b, c}));
                    if (v > best) {
                        best = v;
                        oracle = (1u << a) | (1u << b) | (1u << c);
                    }
                }
        DQNParams p;
        p.episodes = 300;
        p.n_max = 3;
        p.seed = derive_seed(405, s);
        hits += train_dqn(r, score, p).selected.mask() == oracle;
    }
    return {hits >= 18, fmt("top-3 recovered in %.0f/20 runs", hits)};
}

// ---- 5: gradient check ----

Verdict gradient_check() {
    Rng rng(505);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        QNetwork online(0.3, rng);
        const QNetwork target(0.3, rng);
        Transition t;
        const int bits = static_cast<int>(uniform_index(rng, 8));
        while (t.state.popcount() < bits) t.state.mask |= std::uint32_t{1} << uniform_index(rng, 23);
        do {
            t.action = uniform_index(rng, 23);
        } while (t.state.selected(t.action));
        t.reward = uniform01(rng);
        t.next.mask = t.state.mask | (std::uint32_t{1} << t.action);
        t.done = t.next.popcount() >= 8;
        const std::vector<Transition> batch{t};
        // squared TD error from forward passes only; y is fixed by the target net
        const double y = t.done ? t.reward : td_target(target, t, 0.9);
        auto loss = [&] {
            const double e = online.q_values(t.state)[static_cast<Eigen::Index>(t.action)] - y;
            return e * e;
        };
        const auto lg = loss_and_gradient(online, target, batch, 0.9);
        if (std::abs(lg.loss - loss()) > 1e-12 * std::max(1.0, lg.loss)) return {false, "loss definitions disagree"};
        const Eigen::VectorXd g = lg.gradient;
        const Eigen::VectorXd p = online.parameters();
        Eigen::VectorXd fd(p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            Eigen::VectorXd q = p;
            q[i] = p[i] + 1e-5;
            online.set_parameters(q);
            const double up = loss();
            q[i] = p[i] - 1e-5;
            online.set_parameters(q);
            const double down = loss();
            fd[i] = (up - down) / 2e-5;
        }
        online.set_parameters(p);
        worst = std::max(worst, (g - fd).norm() / std::max({g.norm(), fd.norm(), 1e-300}));
    }
    return {worst <= 1e-4, fmt("max relative gradient error %.2e", worst)};
}

// ---- 6: meta-learner fidelity ----

Verdict meta_learner_fidelity() {
    Rng rng(606);
    auto label_of = [](double x) { return x < 1.0 / 3 ? "low" : x < 2.0 / 3 ? "mid" : "high"; };
    MetaDataset md;
    for (int i = 0; i < 100; ++i) {
        MetaRow r;
        r.dataset = "m" + std::to_string(i);
        for (auto& x : r.features.values) x = uniform01(rng);
        r.label = label_of(r.features.values[6]);
        md.rows.push_back(r);
    }
    const MetaFeatureList m({0, 2, 6, 11, 19});
    ForestParams fp;
    fp.seed = 607;
    const double acc = cross_validated_accuracy(md, m, fp, 5, 608);
    const auto forest = train_rf(md, m, fp);
    const auto labels = md.label_set();
    int outside = 0;
    for (int i = 0; i < 1000; ++i) {
        MetaFeatureVector v;
        for (auto& x : v.values) x = 6.0 * uniform01(rng) - 3.0;
        outside += !std::binary_search(labels.begin(), labels.end(), forest.predict(v));
    }
    return {acc >= 0.9 && outside == 0 && labels.size() == 3,
            fmt("5-fold accuracy %.3f, %.0f/1000 predictions outside the label set", acc, outside)};
}

// ---- 7: end to end ----

Verdict end_to_end(const fs::path& data) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto corpus = load_corpus(data / "corpus");
    const auto portfolio = Portfolio::standard();
    TrainParams tp;
    tp.seed = 2026;
    const auto trained = train_pipeline(corpus, portfolio, tp);
    const auto iris = load_corpus(data / "heldout").front();
    GAParams ga;
    ga.seed = derive_seed(2026, "ga");
    const auto rec = recommend(trained.artifact, portfolio, iris, ga);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto rerun = train_pipeline(corpus, portfolio, tp);
    const bool identical = artifact_to_string(rerun.artifact) == artifact_to_string(trained.artifact);
    const bool ok = corpus.size() == 10 && secs < 60.0 && trained.artifact.m_list.size() <= kMaxSelected &&
                    portfolio.contains(rec.algorithm) &&
                    rec.outcome.f_score >= rec.default_outcome.f_score && identical;
    return {ok, fmt("%.1f s, |M_list| = %.0f, ", secs, static_cast<double>(trained.artifact.m_list.size())) +
                    rec.algorithm + fmt(" tuned %.3f vs default %.3f", rec.outcome.f_score, rec.default_outcome.f_score) +
                    (identical ? ", rerun byte-identical" : ", rerun differs")};
}

// ---- 8: replay and target mechanics ----

Verdict replay_mechanics() {
    Rng rng(808);
    RewardTable r;
    for (auto& x : r.rewards) x = uniform01(rng);
    DQNParams p;
    p.seed = 809;
    DQNTrace trace;
    (void)train_dqn(r, additive_scorer(r), p, &trace);

    const std::size_t max_buffer = *std::max_element(trace.buffer_sizes.begin(), trace.buffer_sizes.end());
    const std::set<std::size_t> syncs(trace.sync_steps.begin(), trace.sync_steps.end());
    std::size_t stray = 0, changes = 0;
    for (std::size_t i = 1; i < trace.target_checksums.size(); ++i) {
        if (trace.target_checksums[i] == trace.target_checksums[i - 1]) continue;
        ++changes;
        stray += syncs.count(i + 1) == 0;
    }
    for (auto s : trace.sync_steps) stray += s % p.target_sync != 0;
    std::size_t bad_episodes = 0;
    for (auto len : trace.episode_lengths) bad_episodes += len != p.n_max;

    // eviction order of the ring itself
    ReplayBuffer ring(200);
    for (int i = 0; i < 450; ++i) {
        Transition t;
        t.reward = i;
        ring.push(t);
    }
    const bool fifo = ring.size() == 200 && ring.at(0).reward == 250 && ring.at(199).reward == 449;

    const bool ok = max_buffer <= 200 && stray == 0 && changes > 0 &&
                    trace.episode_lengths.size() == p.episodes && bad_episodes == 0 && fifo;
    return {ok, fmt("max buffer %.0f, %.0f target changes all at sync steps", static_cast<double>(max_buffer),
                    static_cast<double>(changes)) +
                    fmt(", %.0f/%.0f episodes of length n_max", static_cast<double>(p.episodes - bad_episodes),
                        static_cast<double>(p.episodes))};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path data = argc > 1 ? fs::path(argv[1]) : fs::path("data");
    struct Criterion {
        const char* name;
        double limit;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 metric oracles", 5, metric_oracles},
        {"2 GA convergence", 30, ga_convergence},
        {"3 HPO dominance", 600, [&] { return hpo_dominance(data); }},
        {"4 DQN subset oracle", 120, dqn_oracle},
        {"5 gradient correctness", 30, gradient_check},
        {"6 meta-learner fidelity", 10, meta_learner_fidelity},
        {"7 end-to-end", 1e9, [&] { return end_to_end(data); }},  // own 60 s budget inside
        {"8 replay/target mechanics", 1e9, replay_mechanics},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= c.limit) {
            v.ok = false;
            v.detail += fmt(" [over the %.0f s budget]", c.limit);
        }
        failures += !v.ok;
        std::printf("%s  %-26s %s (%.1f s)\n", v.ok ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
