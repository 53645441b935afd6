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


#include "autocash/dqn.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "autocash/errors.hpp"

namespace autocash {

namespace {

constexpr std::uint32_t kFullMask = (std::uint32_t{1} << kMetaFeatureCount) - 1;

Eigen::VectorXd as_input(SelectionState s) {
    Eigen::VectorXd x(QNetwork::kInputs);
    for (int i = 0; i < QNetwork::kInputs; ++i) x[i] = s.selected(static_cast<std::size_t>(i));
    return x;
}

void fill_uniform(Eigen::Ref<Eigen::MatrixXd> m, double scale, Rng& rng) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = scale * (2.0 * uniform01(rng) - 1.0);
    }
}

}  // namespace

int SelectionState::popcount() const { return std::popcount(mask); }

StepResult env_step(SelectionState s, std::size_t action, const RewardTable& rewards,
                    std::size_t n_max) {
    if (action >= kMetaFeatureCount) throw ContractError("env_step: action out of range");
    if (s.selected(action)) {
        throw ContractError("env_step: meta-feature " + std::to_string(action) +
                            " is already selected");
    }
    StepResult r;
    r.next.mask = s.mask | (std::uint32_t{1} << action);
    r.reward = rewards[action];
    r.done = static_cast<std::size_t>(r.next.popcount()) >= n_max;
    return r;
}

QNetwork::QNetwork()
    : w1_(Eigen::MatrixXd::Zero(kHidden, kInputs)),
      w2_(Eigen::MatrixXd::Zero(kHidden, kHidden)),
      w3_(Eigen::MatrixXd::Zero(kOutputs, kHidden)),
      b1_(Eigen::VectorXd::Zero(kHidden)),
      b2_(Eigen::VectorXd::Zero(kHidden)),
      b3_(Eigen::VectorXd::Zero(kOutputs)) {}

QNetwork::QNetwork(double scale, Rng& rng) : QNetwork() {
    fill_uniform(w1_, scale, rng);
    fill_uniform(b1_, scale, rng);
    fill_uniform(w2_, scale, rng);
    fill_uniform(b2_, scale, rng);
    fill_uniform(w3_, scale, rng);
    fill_uniform(b3_, scale, rng);
}

Eigen::VectorXd QNetwork::q_values(SelectionState s) const {
    const Eigen::VectorXd h1 = (w1_ * as_input(s) + b1_).cwiseMax(0.0);
    const Eigen::VectorXd h2 = (w2_ * h1 + b2_).cwiseMax(0.0);
    return w3_ * h2 + b3_;
}

std::size_t QNetwork::parameter_count() {
    return static_cast<std::size_t>(kHidden * kInputs + kHidden + kHidden * kHidden + kHidden +
                                    kOutputs * kHidden + kOutputs);
}

Eigen::VectorXd QNetwork::parameters() const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index o = 0;
    auto put = [&](const auto& m) {
        p.segment(o, m.size()) = m.reshaped();
        o += m.size();
    };
    put(w1_);
    put(b1_);
    put(w2_);
    put(b2_);
    put(w3_);
    put(b3_);
    return p;
}

void QNetwork::set_parameters(const Eigen::VectorXd& p) {
    if (p.size() != static_cast<Eigen::Index>(parameter_count())) {
        throw ContractError("QNetwork: expected " + std::to_string(parameter_count()) +
                            " parameters, got " + std::to_string(p.size()));
    }
    Eigen::Index o = 0;
    auto take = [&](auto& m) {
        m.reshaped() = p.segment(o, m.size());
        o += m.size();
    };
    take(w1_);
    take(b1_);
    take(w2_);
    take(b2_);
    take(w3_);
    take(b3_);
}

std::uint64_t QNetwork::checksum() const {
    const Eigen::VectorXd p = parameters();
    std::string bytes(static_cast<std::size_t>(p.size()) * sizeof(double), '\0');
    std::memcpy(bytes.data(), p.data(), bytes.size());
    return fnv1a64(bytes);
}

bool QNetwork::operator==(const QNetwork& o) const { return parameters() == o.parameters(); }

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ContractError("replay buffer capacity must be positive");
    items_.reserve(capacity);
}

void ReplayBuffer::push(const Transition& t) {
    if (items_.size() < capacity_) {
        items_.push_back(t);
    } else {
        items_[head_] = t;
        head_ = (head_ + 1) % capacity_;
    }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= items_.size()) throw ContractError("replay buffer index out of range");
    return items_[(head_ + i) % items_.size()];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
    if (n > items_.size()) throw ContractError("replay buffer: sample larger than contents");
    std::vector<std::size_t> idx(items_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<Transition> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, idx.size() - i));
        std::swap(idx[i], idx[j]);
        out.push_back(at(idx[i]));
    }
    return out;
}

double td_target(const QNetwork& target, const Transition& t, double gamma) {
    if (t.done || t.next.mask == kFullMask) return t.reward;
    const Eigen::VectorXd q = target.q_values(t.next);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < kMetaFeatureCount; ++a) {
        if (!t.next.selected(a)) best = std::max(best, q[static_cast<Eigen::Index>(a)]);
    }
    return t.reward + gamma * best;
}

struct QBackprop {
    static LossGradient run(const QNetwork& net, const QNetwork& target,
                            std::span<const Transition> batch, double gamma) {
        if (batch.empty()) throw ContractError("q_update: empty batch");
        Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(net.w1_.rows(), net.w1_.cols());
        Eigen::MatrixXd g2 = Eigen::MatrixXd::Zero(net.w2_.rows(), net.w2_.cols());
        Eigen::MatrixXd g3 = Eigen::MatrixXd::Zero(net.w3_.rows(), net.w3_.cols());
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(net.b1_.size());
        Eigen::VectorXd c2 = Eigen::VectorXd::Zero(net.b2_.size());
        Eigen::VectorXd c3 = Eigen::VectorXd::Zero(net.b3_.size());
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        double loss = 0.0;

        for (const auto& t : batch) {
            if (t.action >= kMetaFeatureCount) throw ContractError("q_update: bad action");
            const double y = td_target(target, t, gamma);
            const Eigen::VectorXd x = as_input(t.state);
            const Eigen::VectorXd z1 = net.w1_ * x + net.b1_;
            const Eigen::VectorXd h1 = z1.cwiseMax(0.0);
            const Eigen::VectorXd z2 = net.w2_ * h1 + net.b2_;
            const Eigen::VectorXd h2 = z2.cwiseMax(0.0);
            const auto a = static_cast<Eigen::Index>(t.action);
            const double err = net.w3_.row(a).dot(h2) + net.b3_[a] - y;
            loss += err * err * inv_b;

            const double dq = 2.0 * err * inv_b;
            g3.row(a) += dq * h2.transpose();
            c3[a] += dq;
            const Eigen::VectorXd d2 =
                (dq * net.w3_.row(a).transpose()).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
            g2 += d2 * h1.transpose();
            c2 += d2;
            const Eigen::VectorXd d1 =
                (net.w2_.transpose() * d2).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
            g1 += d1 * x.transpose();
            c1 += d1;
        }

        QNetwork g;
        g.w1_ = std::move(g1);
        g.b1_ = std::move(c1);
        g.w2_ = std::move(g2);
        g.b2_ = std::move(c2);
        g.w3_ = std::move(g3);
        g.b3_ = std::move(c3);
        return {loss, g.parameters()};
    }
};

LossGradient loss_and_gradient(const QNetwork& online, const QNetwork& target,
                               std::span<const Transition> batch, double gamma) {
    return QBackprop::run(online, target, batch, gamma);
}

double q_update(QNetwork& online, const QNetwork& target, std::span<const Transition> batch,
                double alpha, double gamma) {
    const LossGradient lg = loss_and_gradient(online, target, batch, gamma);
    if (lg.loss > 0.0) online.set_parameters(online.parameters() - alpha * lg.gradient);
    return lg.loss;
}

std::size_t select_action(const QNetwork& net, SelectionState s, double epsilon, Rng& rng) {
    std::vector<std::size_t> legal;
    for (std::size_t a = 0; a < kMetaFeatureCount; ++a) {
        if (!s.selected(a)) legal.push_back(a);
    }
    if (legal.empty()) throw ContractError("select_action: no legal actions");
    if (uniform01(rng) < epsilon) return legal[uniform_index(rng, legal.size())];
    const Eigen::VectorXd q = net.q_values(s);
    std::size_t best = legal.front();
    for (auto a : legal) {
        if (q[static_cast<Eigen::Index>(a)] > q[static_cast<Eigen::Index>(best)]) best = a;
    }
    return best;
}

void DQNParams::validate() const {
    if (episodes < 1) throw ContractError("DQN: episodes must be at least 1");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ContractError("DQN: gamma must lie in [0, 1)");
    for (double e : {eps_start, eps_end}) {
        if (!(e >= 0.0 && e <= 1.0)) throw ContractError("DQN: epsilon must lie in [0, 1]");
    }
    if (!(eps_decay_fraction >= 0.0 && eps_decay_fraction <= 1.0)) {
        throw ContractError("DQN: decay fraction must lie in [0, 1]");
    }
    if (n_max < 1 || n_max > kMaxSelected) {
        throw ContractError("DQN: n_max must lie in [1, " + std::to_string(kMaxSelected) + "]");
    }
    if (minibatch < 1) throw ContractError("DQN: minibatch must be positive");
    if (minibatch > replay_capacity) throw ContractError("DQN: minibatch exceeds replay capacity");
    if (target_sync < 1) throw ContractError("DQN: target sync interval must be positive");
    if (!(alpha >= 0.0)) throw ContractError("DQN: alpha must be non-negative");
}

double DQNParams::epsilon(std::size_t step, std::size_t total_steps) const {
    const double horizon = eps_decay_fraction * static_cast<double>(total_steps);
    if (horizon <= 0.0) return eps_end;
    const double f = std::min(1.0, static_cast<double>(step) / horizon);
    return eps_start + (eps_end - eps_start) * f;
}

MaskScorer additive_scorer(const RewardTable& rewards) {
    return [rewards](const MetaFeatureList& m) {
        double s = 0.0;
        for (int i : m.indices()) s += rewards[static_cast<std::size_t>(i)];
        return s;
    };
}

MaskScorer cv_scorer(const MetaDataset& md, const ForestParams& forest, std::size_t folds,
                     std::uint64_t fold_seed) {
    return [&md, forest, folds, fold_seed](const MetaFeatureList& m) {
        ForestParams fp = forest;
        fp.exec = Exec::serial;
        return cross_validated_accuracy(md, m, fp, folds, fold_seed);
    };
}

DQNResult train_dqn(const RewardTable& rewards, const MaskScorer& scorer, const DQNParams& params,
                    DQNTrace* trace) {
    params.validate();
    Rng rng(params.seed);
    Rng init_rng(derive_seed(params.seed, "init"));
    QNetwork online(params.init_scale, init_rng);
    QNetwork target = online;
    ReplayBuffer replay(params.replay_capacity);

    const std::size_t total = params.episodes * params.n_max;
    std::size_t step = 0;
    std::vector<std::uint32_t> terminals;
    terminals.reserve(params.episodes);

    for (std::size_t e = 0; e < params.episodes; ++e) {
        SelectionState s;
        std::size_t length = 0;
        bool done = false;
        while (!done) {
            const std::size_t a = select_action(online, s, params.epsilon(step, total), rng);
            const StepResult r = env_step(s, a, rewards, params.n_max);
            replay.push({s, a, r.reward, r.next, r.done});
            double loss = 0.0;
            if (replay.size() >= params.minibatch) {
                const auto batch = replay.sample(params.minibatch, rng);
                loss = q_update(online, target, batch, params.alpha, params.gamma);
            }
            ++step;
            ++length;
            const bool sync = step % params.target_sync == 0;
            if (sync) target = online;
            if (trace) {
                trace->buffer_sizes.push_back(replay.size());
                trace->target_checksums.push_back(target.checksum());
                if (sync) trace->sync_steps.push_back(step);
                trace->visited_popcounts.push_back(r.next.popcount());
                trace->losses.push_back(loss);
            }
            s = r.next;
            done = r.done;
        }
        if (trace) trace->episode_lengths.push_back(length);
        terminals.push_back(s.mask);
    }

    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    std::vector<double> scores(terminals.size());
    for_each_index(params.exec, terminals.size(), [&](std::size_t i) {
        scores[i] = scorer(MetaFeatureList::from_mask(terminals[i]));
    });

    DQNResult out;
    std::size_t best = 0;
    for (std::size_t i = 1; i < terminals.size(); ++i) {
        const int pc_i = std::popcount(terminals[i]);
        const int pc_b = std::popcount(terminals[best]);
        if (scores[i] > scores[best] ||
            (scores[i] == scores[best] &&
             (pc_i < pc_b ||
              (pc_i == pc_b && MetaFeatureList::from_mask(terminals[i]).indices() <
                                   MetaFeatureList::from_mask(terminals[best]).indices())))) {
            best = i;
        }
    }
    out.selected = MetaFeatureList::from_mask(terminals[best]);
    out.score = scores[best];
    for (std::size_t i = 0; i < terminals.size(); ++i) out.candidates.emplace_back(terminals[i], scores[i]);
    out.network = std::move(online);
    return out;
}

}  // namespace autocash
