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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "autocash/meta_learner.hpp"
#include "autocash/metafeatures.hpp"
#include "autocash/parallel.hpp"
#include "autocash/random.hpp"
#include "autocash/rewards.hpp"

namespace autocash {

/// Bit i set means meta-feature i is selected.
struct SelectionState {
    std::uint32_t mask = 0;

    int popcount() const;
    bool selected(std::size_t i) const { return (mask >> i) & 1u; }
    bool operator==(const SelectionState&) const = default;
};

struct StepResult {
    SelectionState next;
    double reward = 0.0;
    bool done = false;
};

/// Sets bit `action`; the reward is rewards[action]; done once n_max bits
/// are set. ContractError if the bit is already set.
StepResult env_step(SelectionState s, std::size_t action, const RewardTable& rewards,
                    std::size_t n_max);

/// 23 -> 64 -> 64 -> 23 perceptron with ReLU hidden layers. Input is the
/// state bit vector, output one value per action.
class QNetwork {
public:
    static constexpr int kInputs = static_cast<int>(kMetaFeatureCount);
    static constexpr int kHidden = 64;
    static constexpr int kOutputs = static_cast<int>(kMetaFeatureCount);

    /// All weights and biases uniform in [-scale, scale].
    QNetwork(double scale, Rng& rng);
    QNetwork();

    Eigen::VectorXd q_values(SelectionState s) const;

    static std::size_t parameter_count();
    /// Flattened w1, b1, w2, b2, w3, b3 (column-major matrices).
    Eigen::VectorXd parameters() const;
    void set_parameters(const Eigen::VectorXd& p);
    /// FNV-1a over the parameter bytes.
    std::uint64_t checksum() const;

    bool operator==(const QNetwork&) const;

private:
    friend struct QBackprop;
    Eigen::MatrixXd w1_, w2_, w3_;
    Eigen::VectorXd b1_, b2_, b3_;
};

struct Transition {
    SelectionState state;
    std::size_t action = 0;
    double reward = 0.0;
    SelectionState next;
    bool done = false;
};

/// Fixed-capacity ring buffer; the oldest entry is overwritten when full.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    /// Entry i in insertion order, 0 being the oldest retained.
    const Transition& at(std::size_t i) const;
    /// `n` distinct entries drawn uniformly.
    std::vector<Transition> sample(std::size_t n, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<Transition> items_;
};

struct LossGradient {
    double loss = 0.0;
    Eigen::VectorXd gradient;
};

/// Bootstrapped target: r, or r + gamma * max over unset bits of the target
/// network's values at the next state.
double td_target(const QNetwork& target, const Transition& t, double gamma);

/// Mean squared TD error over the batch and its gradient with respect to the
/// online parameters (targets held fixed).
LossGradient loss_and_gradient(const QNetwork& online, const QNetwork& target,
                               std::span<const Transition> batch, double gamma);

/// One plain gradient step of size alpha; returns the pre-step loss.
double q_update(QNetwork& online, const QNetwork& target, std::span<const Transition> batch,
                double alpha, double gamma);

/// Epsilon-greedy over unset bits; greedy ties go to the lowest index. One
/// uniform draw is always consumed to decide between exploring and exploiting.
std::size_t select_action(const QNetwork& net, SelectionState s, double epsilon, Rng& rng);

struct DQNParams {
    std::size_t episodes = 300;
    double alpha = 0.01;
    double gamma = 0.9;
    double eps_start = 1.0;
    double eps_end = 0.1;
    /// Share of all steps over which epsilon decays linearly.
    double eps_decay_fraction = 0.5;
    std::size_t minibatch = 32;
    std::size_t target_sync = 100;
    std::size_t n_max = kMaxSelected;
    std::size_t replay_capacity = 200;
    double init_scale = 0.05;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;

    void validate() const;
    double epsilon(std::size_t step, std::size_t total_steps) const;
};

/// Scores a candidate list; larger is better.
using MaskScorer = std::function<double(const MetaFeatureList&)>;

/// Sum of the rewards of the listed features.
MaskScorer additive_scorer(const RewardTable& rewards);
/// Cross-validated meta-learner accuracy on `md` projected onto the list.
MaskScorer cv_scorer(const MetaDataset& md, const ForestParams& forest, std::size_t folds,
                     std::uint64_t fold_seed);

/// Per-step instrumentation of a training run.
struct DQNTrace {
    std::vector<std::size_t> buffer_sizes;
    std::vector<std::uint64_t> target_checksums;
    std::vector<std::size_t> sync_steps;
    std::vector<std::size_t> episode_lengths;
    std::vector<int> visited_popcounts;
    std::vector<double> losses;
};

struct DQNResult {
    MetaFeatureList selected;
    double score = 0.0;
    /// Distinct terminal masks with their scores, ascending by mask.
    std::vector<std::pair<std::uint32_t, double>> candidates;
    QNetwork network;
};

/// Trains the selector, then scores every distinct terminal mask and returns
/// the best: highest score, then fewer bits, then lexicographically smaller
/// index list.
DQNResult train_dqn(const RewardTable& rewards, const MaskScorer& scorer, const DQNParams& params,
                    DQNTrace* trace = nullptr);

}  // namespace autocash
