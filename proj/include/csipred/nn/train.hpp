// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSIPRED_NN_TRAIN_HPP
#define CSIPRED_NN_TRAIN_HPP

#include "csipred/nn/adam.hpp"
#include "csipred/nn/gradients.hpp"
#include "csipred/nn/model.hpp"

#include <algorithm>
#include <random>
#include <span>
#include <vector>

namespace csipred::nn
{
    struct TrainConfig
    {
        std::size_t epochs = 200;
        std::size_t batch_size = 256;
        double learning_rate = 1e-3;
        std::uint64_t seed = 1;
        double adam_beta1 = 0.9;
        double adam_beta2 = 0.999;
        double adam_eps = 1e-8;

        void validate() const
        {
            if (epochs < 1)
                throw ConfigError("epochs must be >= 1");
            if (batch_size < 1)
                throw ConfigError("batch_size must be >= 1");
            if (!(learning_rate > 0.0))
                throw ConfigError("learning_rate must be > 0");
        }
    };

    struct TrainReport
    {
        PredictorModel model;
        std::vector<double> train_loss; // per epoch, dB^2
        std::vector<double> val_loss;   // per epoch, dB^2
    };

    struct NormStats
    {
        double mean = 0.0;
        double std = 1.0;
    };

    // Mean and standard deviation over every x and y entry of the training split.
    // A degenerate (constant) split gets unit scale.
    inline NormStats normalization_stats(std::span<const WindowSample> train)
    {
        double sum = 0.0, sq = 0.0;
        std::size_t n = 0;
        for (const auto &s : train)
        {
            for (double v : s.x)
                sum += v, ++n;
            for (double v : s.y)
                sum += v, ++n;
        }
        if (n == 0)
            return {};
        const double mean = sum / static_cast<double>(n);
        for (const auto &s : train)
        {
            for (double v : s.x)
                sq += (v - mean) * (v - mean);
            for (double v : s.y)
                sq += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(sq / static_cast<double>(n));
        return {mean, sd > 1e-9 ? sd : 1.0};
    }

    // Samples in the network's normalized domain and input order.
    inline std::vector<WindowSample> to_network_domain(const PredictorModel &m, std::span<const WindowSample> samples)
    {
        std::vector<WindowSample> out(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            network_input(m, samples[i].x, out[i].x);
            out[i].y.resize(samples[i].y.size());
            for (std::size_t k = 0; k < samples[i].y.size(); ++k)
                out[i].y[k] = (samples[i].y[k] - m.norm_mean) / m.norm_std;
            out[i].anchor_slot = samples[i].anchor_slot;
        }
        return out;
    }

    inline double mean_loss(const PredictorModel &m, std::span<const WindowSample> net_samples)
    {
        double total = 0.0;
        for (const auto &s : net_samples)
            total += mse_loss(forward_raw(m, s.x), s.y);
        return total / static_cast<double>(net_samples.size());
    }

    inline double batch_step(PredictorModel &m, std::span<const WindowSample> batch, Adam &opt)
    {
        if (m.kind == ModelKind::dnn)
        {
            auto &p = std::get<DenseParams>(m.net);
            auto r = gradients(p, batch);
            opt.step(p.data, r.grad.data);
            return r.loss;
        }
        auto &p = std::get<LstmParams>(m.net);
        auto r = gradients(p, batch);
        opt.step(p.data, r.grad.data);
        return r.loss;
    }

    // Mini-batch Adam on the z-scored data. The sample order is reshuffled every
    // epoch from a generator seeded with cfg.seed, so a run is reproducible
    // bit-for-bit. Losses are reported in the original dB^2 scale.
    inline TrainReport train(ModelKind kind, std::size_t hidden, std::span<const WindowSample> train_set, std::span<const WindowSample> val_set, const TrainConfig &cfg)
    {
        cfg.validate();
        if (train_set.empty() || val_set.empty())
            throw std::invalid_argument("train: training and validation sets must be non-empty");
        const std::size_t n_in = train_set.front().x.size();
        const std::size_t n_out = train_set.front().y.size();
        if (n_in < 1 || n_out < 1)
            throw ConfigError("train: samples need at least one input and one target");
        for (const auto *set : {&train_set, &val_set})
            for (const auto &s : *set)
                if (s.x.size() != n_in || s.y.size() != n_out)
                    throw DimensionError("train: samples have inconsistent dimensions");

        std::mt19937_64 rng(cfg.seed);
        PredictorModel m = make_model(kind, n_in - 1, hidden, n_out + 1);
        if (kind == ModelKind::dnn)
            m.net = init_dense(n_in, hidden, n_out, rng);
        else
            m.net = init_lstm(hidden, n_out, rng);
        const auto stats = normalization_stats(train_set);
        m.norm_mean = stats.mean;
        m.norm_std = stats.std;

        auto tr = to_network_domain(m, train_set);
        const auto va = to_network_domain(m, val_set);
        const double scale = m.norm_std * m.norm_std;

        Adam opt(m.params().size(), {cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps});
        TrainReport report;
        for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch)
        {
            std::shuffle(tr.begin(), tr.end(), rng);
            double epoch_loss = 0.0;
            for (std::size_t start = 0; start < tr.size(); start += cfg.batch_size)
            {
                const std::size_t end = std::min(tr.size(), start + cfg.batch_size);
                const std::span<const WindowSample> batch(tr.data() + start, end - start);
                epoch_loss += batch_step(m, batch, opt) * static_cast<double>(end - start);
            }
            report.train_loss.push_back(epoch_loss / static_cast<double>(tr.size()) * scale);
            report.val_loss.push_back(mean_loss(m, va) * scale);
        }
        report.model = std::move(m);
        return report;
    }

    inline TrainReport train(ModelKind kind, std::size_t hidden, const DatasetSplit &data, const TrainConfig &cfg)
    {
        if (data.train.empty() || data.val.empty())
            throw std::invalid_argument("train: dataset has an empty train or validation split");
        return train(kind, hidden, data.train, data.val, cfg);
    }
} // namespace csipred::nn

#endif // CSIPRED_NN_TRAIN_HPP
