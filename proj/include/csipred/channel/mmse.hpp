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

#ifndef CSIPRED_CHANNEL_MMSE_HPP
#define CSIPRED_CHANNEL_MMSE_HPP

#include "csipred/channel/fading.hpp"
#include "csipred/common.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace csipred
{
    inline constexpr double max_gram_condition = 1e12;

    using SmallCMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

    // Post-equalization SINR per spatial layer for a linear MMSE receiver:
    //   SINR_l = 1 / [(I + rho H^H H)^-1]_ll - 1
    // Layer l is carried by transmit antenna l (no precoding, equal power). The
    // inverse is taken through the eigendecomposition of the Gram matrix, which
    // also gives its condition number and keeps the result positive for tiny rho.
    inline std::vector<double> per_rb_sinr(const Eigen::Ref<const Eigen::MatrixXcd> &h, double snr_linear, std::size_t n_layers)
    {
        if (!(snr_linear > 0.0) || !std::isfinite(snr_linear))
            throw std::invalid_argument("per_rb_sinr: snr must be positive");
        if (n_layers < 1 || n_layers > static_cast<std::size_t>(std::min(h.rows(), h.cols())))
            throw DimensionError("per_rb_sinr: n_layers must be in [1, min(n_rx, n_tx)]");

        const auto L = static_cast<Eigen::Index>(n_layers);
        SmallCMatrix gram = h.leftCols(L).adjoint() * h.leftCols(L);
        Eigen::SelfAdjointEigenSolver<SmallCMatrix> es(gram);
        if (es.info() != Eigen::Success)
            throw DegenerateChannelError("per_rb_sinr: eigendecomposition failed");
        const auto &lambda = es.eigenvalues(); // ascending
        const double lmin = lambda(0);
        const double lmax = lambda(L - 1);
        if (!(lmin > 0.0) || lmax / lmin > max_gram_condition)
            throw DegenerateChannelError("per_rb_sinr: channel Gram matrix is singular or ill-conditioned (condition > 1e12)");

        std::vector<double> out(n_layers);
        const auto &v = es.eigenvectors();
        for (Eigen::Index l = 0; l < L; ++l)
        {
            double mse = 0.0;  // [(I + rho G)^-1]_ll
            double gain = 0.0; // 1 - mse
            for (Eigen::Index k = 0; k < L; ++k)
            {
                const double w = std::norm(v(l, k));
                const double rl = snr_linear * lambda(k);
                mse += w / (1.0 + rl);
                gain += w * rl / (1.0 + rl);
            }
            out[static_cast<std::size_t>(l)] = gain / mse;
        }
        return out;
    }

    // Per-layer, per-RB SINR, gamma[layer][rb] stored layer-major.
    struct SinrGrid
    {
        std::size_t n_layers = 0;
        std::size_t n_rb = 0;
        std::vector<double> gamma;

        SinrGrid() = default;
        SinrGrid(std::size_t layers, std::size_t rbs, double fill = 0.0) : n_layers(layers), n_rb(rbs), gamma(layers * rbs, fill) {}

        double &at(std::size_t l, std::size_t n) { return gamma[l * n_rb + n]; }
        double at(std::size_t l, std::size_t n) const { return gamma[l * n_rb + n]; }
        std::size_t size() const { return gamma.size(); }
        bool empty() const { return gamma.empty(); }
    };

    // MMSE SINR grid of one slot given its [rb][rx][tx] frequency response.
    inline SinrGrid compute_sinr_grid(std::span<const cplx> slot_h, std::size_t n_rb, std::size_t n_rx, std::size_t n_tx, double snr_linear, std::size_t n_layers)
    {
        if (slot_h.size() != n_rb * n_rx * n_tx)
            throw DimensionError("compute_sinr_grid: slot has wrong size");
        SinrGrid grid(n_layers, n_rb);
        Eigen::MatrixXcd h(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx));
        for (std::size_t n = 0; n < n_rb; ++n)
        {
            const cplx *p = slot_h.data() + n * n_rx * n_tx;
            for (std::size_t r = 0; r < n_rx; ++r)
                for (std::size_t t = 0; t < n_tx; ++t)
                    h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = p[r * n_tx + t];
            const auto s = per_rb_sinr(h, snr_linear, n_layers);
            for (std::size_t l = 0; l < n_layers; ++l)
                grid.at(l, n) = s[l];
        }
        return grid;
    }
} // namespace csipred

#endif // CSIPRED_CHANNEL_MMSE_HPP
