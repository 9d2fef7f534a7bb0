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

#ifndef CSIPRED_NN_GRADIENTS_HPP
#define CSIPRED_NN_GRADIENTS_HPP

#include "csipred/nn/dense.hpp"
#include "csipred/nn/lstm.hpp"
#include "csipred/predictor/window_sample.hpp"

#include <span>
#include <vector>

namespace csipred::nn
{
    inline double mse_loss(std::span<const double> pred, std::span<const double> target)
    {
        if (pred.size() != target.size())
            throw DimensionError("mse_loss: prediction has " + std::to_string(pred.size()) + " entries, target has " + std::to_string(target.size()));
        if (pred.empty())
            throw DimensionError("mse_loss: empty vectors");
        double s = 0.0;
        for (std::size_t k = 0; k < pred.size(); ++k)
        {
            const double e = target[k] - pred[k];
            s += e * e;
        }
        return s / static_cast<double>(pred.size());
    }

    template <typename Params>
    struct GradientResult
    {
        Params grad;
        double loss = 0.0; // mean loss over the batch
    };

    // Mean gradient of mse_loss over the batch; x is fed in stored order.
    inline GradientResult<DenseParams> gradients(const DenseParams &p, std::span<const WindowSample> batch)
    {
        if (batch.empty())
            throw std::invalid_argument("gradients: empty batch");
        GradientResult<DenseParams> r{p.zeros_like(), 0.0};
        auto &g = r.grad;
        std::vector<double> pre(p.hidden), hid(p.hidden), out(p.n_out), dout(p.n_out), dhid(p.hidden);
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        const double inv_o = 1.0 / static_cast<double>(p.n_out);

        for (const auto &s : batch)
        {
            check_dims(p, s.x.size());
            if (s.y.size() != p.n_out)
                throw DimensionError("gradients: target size does not match network output");
            dense_forward_into(p, s.x, pre, hid, out);
            r.loss += mse_loss(out, s.y) * inv_b;

            for (std::size_t k = 0; k < p.n_out; ++k)
                dout[k] = 2.0 * (out[k] - s.y[k]) * inv_o * inv_b;
            std::fill(dhid.begin(), dhid.end(), 0.0);
            for (std::size_t k = 0; k < p.n_out; ++k)
            {
                g.b2(k) += dout[k];
                for (std::size_t j = 0; j < p.hidden; ++j)
                {
                    g.w2(k, j) += dout[k] * hid[j];
                    dhid[j] += dout[k] * p.w2(k, j);
                }
            }
            for (std::size_t j = 0; j < p.hidden; ++j)
            {
                if (pre[j] <= 0.0)
                    continue;
                g.b1(j) += dhid[j];
                for (std::size_t i = 0; i < p.n_in; ++i)
                    g.w1(j, i) += dhid[j] * s.x[i];
            }
        }
        return r;
    }

    // Backpropagation through time over the full sequence.
    inline GradientResult<LstmParams> gradients(const LstmParams &p, std::span<const WindowSample> batch)
    {
        if (batch.empty())
            throw std::invalid_argument("gradients: empty batch");
        check_dims(p);
        GradientResult<LstmParams> r{p.zeros_like(), 0.0};
        auto &g = r.grad;
        const std::size_t D = p.hidden;
        const double inv_b = 1.0 / static_cast<double>(batch.size());
        const double inv_o = 1.0 / static_cast<double>(p.n_out);

        std::vector<LstmStepCache> steps;
        std::vector<double> zeros(D, 0.0), out(p.n_out), dout(p.n_out);
        std::vector<double> dh(D), dc(D), dh_prev(D), dz(n_gates * D);

        for (const auto &s : batch)
        {
            const std::size_t T = s.x.size();
            if (T == 0)
                throw DimensionError("gradients: empty input sequence");
            if (s.y.size() != p.n_out)
                throw DimensionError("gradients: target size does not match network output");
            if (steps.size() < T)
                steps.resize(T);
            for (std::size_t t = 0; t < T; ++t)
            {
                std::span<const double> hp = t == 0 ? std::span<const double>(zeros) : std::span<const double>(steps[t - 1].h);
                std::span<const double> cp = t == 0 ? std::span<const double>(zeros) : std::span<const double>(steps[t - 1].c);
                lstm_step_into(p, s.x[t], hp, cp, steps[t]);
            }
            const auto &last = steps[T - 1];
            lstm_head_into(p, last.h, out);
            r.loss += mse_loss(out, s.y) * inv_b;

            for (std::size_t k = 0; k < p.n_out; ++k)
                dout[k] = 2.0 * (out[k] - s.y[k]) * inv_o * inv_b;
            std::fill(dh.begin(), dh.end(), 0.0);
            std::fill(dc.begin(), dc.end(), 0.0);
            for (std::size_t k = 0; k < p.n_out; ++k)
            {
                g.head_b(k) += dout[k];
                for (std::size_t d = 0; d < D; ++d)
                {
                    g.head_w(k, d) += dout[k] * last.h[d];
                    dh[d] += dout[k] * p.head_w(k, d);
                }
            }

            for (std::size_t tt = T; tt-- > 0;)
            {
                const auto &st = steps[tt];
                const double *c_prev = tt == 0 ? zeros.data() : steps[tt - 1].c.data();
                const double *h_prev = tt == 0 ? zeros.data() : steps[tt - 1].h.data();
                for (std::size_t d = 0; d < D; ++d)
                {
                    const double i = st.gates[gate_input * D + d];
                    const double f = st.gates[gate_forget * D + d];
                    const double o = st.gates[gate_output * D + d];
                    const double gg = st.gates[gate_candidate * D + d];
                    const double tc = st.tanh_c[d];
                    const double d_o = dh[d] * tc;
                    const double dct = dc[d] + dh[d] * o * (1.0 - tc * tc);
                    dz[gate_input * D + d] = dct * gg * i * (1.0 - i);
                    dz[gate_forget * D + d] = dct * c_prev[d] * f * (1.0 - f);
                    dz[gate_output * D + d] = d_o * o * (1.0 - o);
                    dz[gate_candidate * D + d] = dct * i * (1.0 - gg * gg);
                    dc[d] = dct * f;
                }
                std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
                const double xt = s.x[tt];
                for (std::size_t gi = 0; gi < n_gates; ++gi)
                {
                    for (std::size_t d = 0; d < D; ++d)
                    {
                        const double z = dz[gi * D + d];
                        g.wx(gi, d) += z * xt;
                        g.b(gi, d) += z;
                        double *gw = &g.data[g.off_wh() + (gi * D + d) * D];
                        const double *w = &p.data[p.off_wh() + (gi * D + d) * D];
                        for (std::size_t j = 0; j < D; ++j)
                        {
                            gw[j] += z * h_prev[j];
                            dh_prev[j] += z * w[j];
                        }
                    }
                }
                dh.swap(dh_prev);
            }
        }
        return r;
    }
} // namespace csipred::nn

#endif // CSIPRED_NN_GRADIENTS_HPP
