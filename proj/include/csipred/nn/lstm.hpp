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

#ifndef CSIPRED_NN_LSTM_HPP
#define CSIPRED_NN_LSTM_HPP

#include "csipred/common.hpp"

#include <cmath>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace csipred::nn
{
    // Gate order inside every parameter block.
    enum Gate : std::size_t
    {
        gate_input = 0,
        gate_forget = 1,
        gate_output = 2,
        gate_candidate = 3,
        n_gates = 4
    };

    inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

    // Single-layer LSTM over a scalar input sequence with a linear head on the last
    // hidden state. Flat layout:
    //   [Wx (4 x D) | Wh (4 x D x D) | b (4 x D) | head W (n_out x D) | head b (n_out)]
    struct LstmParams
    {
        std::size_t hidden = 0;
        std::size_t n_out = 0;
        std::vector<double> data;

        LstmParams() = default;
        LstmParams(std::size_t d, std::size_t out) : hidden(d), n_out(out), data(size_for(d, out), 0.0) {}

        static std::size_t size_for(std::size_t d, std::size_t out) { return n_gates * d + n_gates * d * d + n_gates * d + out * d + out; }

        std::size_t off_wh() const { return n_gates * hidden; }
        std::size_t off_b() const { return off_wh() + n_gates * hidden * hidden; }
        std::size_t off_head_w() const { return off_b() + n_gates * hidden; }
        std::size_t off_head_b() const { return off_head_w() + n_out * hidden; }

        double &wx(std::size_t g, std::size_t d) { return data[g * hidden + d]; }
        double wx(std::size_t g, std::size_t d) const { return data[g * hidden + d]; }
        double &wh(std::size_t g, std::size_t d, std::size_t j) { return data[off_wh() + (g * hidden + d) * hidden + j]; }
        double wh(std::size_t g, std::size_t d, std::size_t j) const { return data[off_wh() + (g * hidden + d) * hidden + j]; }
        double &b(std::size_t g, std::size_t d) { return data[off_b() + g * hidden + d]; }
        double b(std::size_t g, std::size_t d) const { return data[off_b() + g * hidden + d]; }
        double &head_w(std::size_t k, std::size_t d) { return data[off_head_w() + k * hidden + d]; }
        double head_w(std::size_t k, std::size_t d) const { return data[off_head_w() + k * hidden + d]; }
        double &head_b(std::size_t k) { return data[off_head_b() + k]; }
        double head_b(std::size_t k) const { return data[off_head_b() + k]; }

        LstmParams zeros_like() const { return LstmParams(hidden, n_out); }
    };

    inline void check_dims(const LstmParams &p)
    {
        if (p.hidden < 1 || p.data.size() != LstmParams::size_for(p.hidden, p.n_out))
            throw DimensionError("lstm: parameter buffer inconsistent with dimensions");
    }

    // Gate weights uniform(+-1/sqrt(1 + D)), head uniform(+-1/sqrt(D)), zero biases
    // except forget-gate bias +1.
    inline LstmParams init_lstm(std::size_t hidden, std::size_t n_out, std::mt19937_64 &rng)
    {
        LstmParams p(hidden, n_out);
        const double a = 1.0 / std::sqrt(static_cast<double>(1 + hidden));
        std::uniform_real_distribution<double> ug(-a, a);
        std::uniform_real_distribution<double> uh(-1.0 / std::sqrt(static_cast<double>(hidden)), 1.0 / std::sqrt(static_cast<double>(hidden)));
        for (std::size_t i = 0; i < p.off_b(); ++i)
            p.data[i] = ug(rng);
        for (std::size_t d = 0; d < hidden; ++d)
            p.b(gate_forget, d) = 1.0;
        for (std::size_t i = p.off_head_w(); i < p.off_head_b(); ++i)
            p.data[i] = uh(rng);
        return p;
    }

    // Activations of one cell update, kept for backpropagation through time.
    struct LstmStepCache
    {
        std::vector<double> gates; // 4 x D post-activation values
        std::vector<double> c;
        std::vector<double> tanh_c;
        std::vector<double> h;
    };

    inline void lstm_step_into(const LstmParams &p, double x_t, std::span<const double> h_prev, std::span<const double> c_prev, LstmStepCache &out)
    {
        const std::size_t D = p.hidden;
        out.gates.resize(n_gates * D);
        out.c.resize(D);
        out.tanh_c.resize(D);
        out.h.resize(D);
        for (std::size_t g = 0; g < n_gates; ++g)
        {
            for (std::size_t d = 0; d < D; ++d)
            {
                double z = p.b(g, d) + p.wx(g, d) * x_t;
                const double *w = &p.data[p.off_wh() + (g * D + d) * D];
                for (std::size_t j = 0; j < D; ++j)
                    z += w[j] * h_prev[j];
                out.gates[g * D + d] = g == gate_candidate ? std::tanh(z) : sigmoid(z);
            }
        }
        for (std::size_t d = 0; d < D; ++d)
        {
            const double i = out.gates[gate_input * D + d];
            const double f = out.gates[gate_forget * D + d];
            const double o = out.gates[gate_output * D + d];
            const double g = out.gates[gate_candidate * D + d];
            out.c[d] = f * c_prev[d] + i * g;
            out.tanh_c[d] = std::tanh(out.c[d]);
            out.h[d] = o * out.tanh_c[d];
        }
    }

    // One cell update; returns (h, c).
    inline std::pair<std::vector<double>, std::vector<double>> lstm_step(const LstmParams &p, double x_t, std::span<const double> h_prev, std::span<const double> c_prev)
    {
        check_dims(p);
        if (h_prev.size() != p.hidden || c_prev.size() != p.hidden)
            throw DimensionError("lstm_step: state size does not match hidden dimension");
        LstmStepCache cache;
        lstm_step_into(p, x_t, h_prev, c_prev, cache);
        return {std::move(cache.h), std::move(cache.c)};
    }

    inline void lstm_head_into(const LstmParams &p, std::span<const double> h, std::span<double> out)
    {
        for (std::size_t k = 0; k < p.n_out; ++k)
        {
            double z = p.head_b(k);
            for (std::size_t d = 0; d < p.hidden; ++d)
                z += p.head_w(k, d) * h[d];
            out[k] = z;
        }
    }

    // Runs the cell over `x` in the order given (callers pass oldest sample first)
    // from zero states and applies the head to the final hidden state.
    inline std::vector<double> lstm_forward(const LstmParams &p, std::span<const double> x)
    {
        check_dims(p);
        if (x.empty())
            throw DimensionError("lstm_forward: empty input sequence");
        std::vector<double> h(p.hidden, 0.0), c(p.hidden, 0.0);
        LstmStepCache cache;
        for (double xt : x)
        {
            lstm_step_into(p, xt, h, c, cache);
            h.swap(cache.h);
            c.swap(cache.c);
        }
        std::vector<double> out(p.n_out);
        lstm_head_into(p, h, out);
        return out;
    }
} // namespace csipred::nn

#endif // CSIPRED_NN_LSTM_HPP
