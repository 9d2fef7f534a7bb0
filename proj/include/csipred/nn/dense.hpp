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

#ifndef CSIPRED_NN_DENSE_HPP
#define CSIPRED_NN_DENSE_HPP

#include "csipred/common.hpp"

#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace csipred::nn
{
    // Single-hidden-layer network y = W2 relu(W1 x + b1) + b2.
    // Parameters live in one flat buffer: [W1 (hidden x n_in) | b1 | W2 (n_out x hidden) | b2],
    // matrices row-major.
    struct DenseParams
    {
        std::size_t n_in = 0;
        std::size_t hidden = 0;
        std::size_t n_out = 0;
        std::vector<double> data;

        DenseParams() = default;
        DenseParams(std::size_t in, std::size_t d, std::size_t out) : n_in(in), hidden(d), n_out(out), data(size_for(in, d, out), 0.0) {}

        static std::size_t size_for(std::size_t in, std::size_t d, std::size_t out) { return d * in + d + out * d + out; }

        double &w1(std::size_t j, std::size_t i) { return data[j * n_in + i]; }
        double w1(std::size_t j, std::size_t i) const { return data[j * n_in + i]; }
        double &b1(std::size_t j) { return data[hidden * n_in + j]; }
        double b1(std::size_t j) const { return data[hidden * n_in + j]; }
        double &w2(std::size_t k, std::size_t j) { return data[off_w2() + k * hidden + j]; }
        double w2(std::size_t k, std::size_t j) const { return data[off_w2() + k * hidden + j]; }
        double &b2(std::size_t k) { return data[off_w2() + n_out * hidden + k]; }
        double b2(std::size_t k) const { return data[off_w2() + n_out * hidden + k]; }

        std::size_t off_w2() const { return hidden * n_in + hidden; }

        DenseParams zeros_like() const { return DenseParams(n_in, hidden, n_out); }
    };

    inline void check_dims(const DenseParams &p, std::size_t x_size)
    {
        if (p.data.size() != DenseParams::size_for(p.n_in, p.hidden, p.n_out))
            throw DimensionError("dense: parameter buffer inconsistent with dimensions");
        if (x_size != p.n_in)
            throw DimensionError("dense: input has " + std::to_string(x_size) + " entries, network expects " + std::to_string(p.n_in));
    }

    // Uniform(+-1/sqrt(fan_in)) weights, zero biases.
    inline DenseParams init_dense(std::size_t n_in, std::size_t hidden, std::size_t n_out, std::mt19937_64 &rng)
    {
        DenseParams p(n_in, hidden, n_out);
        std::uniform_real_distribution<double> u1(-1.0 / std::sqrt(static_cast<double>(n_in)), 1.0 / std::sqrt(static_cast<double>(n_in)));
        std::uniform_real_distribution<double> u2(-1.0 / std::sqrt(static_cast<double>(hidden)), 1.0 / std::sqrt(static_cast<double>(hidden)));
        for (std::size_t j = 0; j < hidden; ++j)
            for (std::size_t i = 0; i < n_in; ++i)
                p.w1(j, i) = u1(rng);
        for (std::size_t k = 0; k < n_out; ++k)
            for (std::size_t j = 0; j < hidden; ++j)
                p.w2(k, j) = u2(rng);
        return p;
    }

    // Hidden pre-activations are written to `pre` when non-empty (used by backprop).
    inline void dense_forward_into(const DenseParams &p, std::span<const double> x, std::span<double> pre, std::span<double> hid, std::span<double> out)
    {
        for (std::size_t j = 0; j < p.hidden; ++j)
        {
            double z = p.b1(j);
            const double *w = &p.data[j * p.n_in];
            for (std::size_t i = 0; i < p.n_in; ++i)
                z += w[i] * x[i];
            if (!pre.empty())
                pre[j] = z;
            hid[j] = z > 0.0 ? z : 0.0;
        }
        for (std::size_t k = 0; k < p.n_out; ++k)
        {
            double z = p.b2(k);
            const double *w = &p.data[p.off_w2() + k * p.hidden];
            for (std::size_t j = 0; j < p.hidden; ++j)
                z += w[j] * hid[j];
            out[k] = z;
        }
    }

    inline std::vector<double> dense_forward(const DenseParams &p, std::span<const double> x)
    {
        check_dims(p, x.size());
        std::vector<double> hid(p.hidden), out(p.n_out);
        dense_forward_into(p, x, {}, hid, out);
        return out;
    }
} // namespace csipred::nn

#endif // CSIPRED_NN_DENSE_HPP
