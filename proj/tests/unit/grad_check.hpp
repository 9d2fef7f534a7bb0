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


#ifndef CSIPRED_TESTS_GRAD_CHECK_HPP
#define CSIPRED_TESTS_GRAD_CHECK_HPP

#include "csipred/nn/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace csipred::testing
{
    // Batch-mean loss of a dense or LSTM parameter set, samples fed as stored.
    template <typename Params>
    double batch_loss(const Params &p, const std::vector<WindowSample> &batch)
    {
        double s = 0.0;
        for (const auto &b : batch)
        {
            std::vector<double> pred;
            if constexpr (std::is_same_v<Params, nn::DenseParams>)
                pred = nn::dense_forward(p, b.x);
            else
                pred = nn::lstm_forward(p, b.x);
            s += nn::mse_loss(pred, b.y);
        }
        return s / static_cast<double>(batch.size());
    }

    inline double relative_error(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6}); }

    // Largest relative error between the analytic gradient and central differences
    // with step h over every parameter.
    template <typename Params>
    double max_gradient_error(const Params &p, const std::vector<WindowSample> &batch, double h = 1e-5)
    {
        const auto analytic = nn::gradients(p, batch).grad.data;
        double worst = 0.0;
        Params q = p;
        for (std::size_t i = 0; i < p.data.size(); ++i)
        {
            const double v = q.data[i];
            q.data[i] = v + h;
            const double lp = batch_loss(q, batch);
            q.data[i] = v - h;
            const double lm = batch_loss(q, batch);
            q.data[i] = v;
            worst = std::max(worst, relative_error(analytic[i], (lp - lm) / (2.0 * h)));
        }
        return worst;
    }

    inline std::vector<WindowSample> random_batch(std::mt19937_64 &rng, std::size_t n, std::size_t in, std::size_t out)
    {
        std::normal_distribution<double> nd(0.0, 1.0);
        std::vector<WindowSample> b(n);
        for (auto &s : b)
        {
            s.x.resize(in);
            s.y.resize(out);
            for (auto &v : s.x)
                v = nd(rng);
            for (auto &v : s.y)
                v = nd(rng);
        }
        return b;
    }

    template <typename Params>
    void randomize(Params &p, std::mt19937_64 &rng, double scale = 0.7)
    {
        std::normal_distribution<double> nd(0.0, scale);
        for (auto &v : p.data)
            v = nd(rng);
    }
} // namespace csipred::testing

#endif
