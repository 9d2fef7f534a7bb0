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

#ifndef CSIPRED_NN_MODEL_HPP
#define CSIPRED_NN_MODEL_HPP

#include "csipred/nn/dense.hpp"
#include "csipred/nn/flops.hpp"
#include "csipred/nn/lstm.hpp"

#include <fstream>
#include <variant>
#include <vector>

namespace csipred::nn
{
    // A trained predictor: network parameters plus the window geometry and the
    // z-score statistics of the training data (shared by inputs and targets).
    struct PredictorModel
    {
        ModelKind kind = ModelKind::dnn;
        std::size_t history_p = 0; // past reports; input length is history_p + 1
        std::size_t t_csi = 2;     // reporting period; output length is t_csi - 1
        double norm_mean = 0.0;
        double norm_std = 1.0;
        std::variant<DenseParams, LstmParams> net;

        std::size_t input_size() const { return history_p + 1; }
        std::size_t output_size() const { return t_csi - 1; }
        std::size_t hidden() const
        {
            return std::visit([](const auto &p) { return p.hidden; }, net);
        }
        const std::vector<double> &params() const
        {
            return std::visit([](const auto &p) -> const std::vector<double> & { return p.data; }, net);
        }
        std::vector<double> &params()
        {
            return std::visit([](auto &p) -> std::vector<double> & { return p.data; }, net);
        }
        std::uint64_t flops() const { return count_flops(kind, input_size(), hidden(), output_size()); }
    };

    // Zero-parameter network of the requested geometry.
    inline PredictorModel make_model(ModelKind kind, std::size_t history_p, std::size_t hidden, std::size_t t_csi)
    {
        if (t_csi < 2)
            throw ConfigError("t_csi must be >= 2 to leave slots to predict");
        if (hidden < 1)
            throw ConfigError("hidden size must be >= 1");
        PredictorModel m;
        m.kind = kind;
        m.history_p = history_p;
        m.t_csi = t_csi;
        if (kind == ModelKind::dnn)
            m.net = DenseParams(history_p + 1, hidden, t_csi - 1);
        else
            m.net = LstmParams(hidden, t_csi - 1);
        return m;
    }

    // Normalizes a newest-first window and orders it the way the network consumes
    // it: as given for the dense net, oldest first for the LSTM.
    inline void network_input(const PredictorModel &m, std::span<const double> x_newest_first, std::vector<double> &out)
    {
        out.resize(x_newest_first.size());
        const std::size_t n = x_newest_first.size();
        for (std::size_t i = 0; i < n; ++i)
        {
            const double v = (x_newest_first[i] - m.norm_mean) / m.norm_std;
            if (m.kind == ModelKind::lstm)
                out[n - 1 - i] = v;
            else
                out[i] = v;
        }
    }

    inline std::vector<double> forward_raw(const PredictorModel &m, std::span<const double> net_input)
    {
        if (m.kind == ModelKind::dnn)
            return dense_forward(std::get<DenseParams>(m.net), net_input);
        return lstm_forward(std::get<LstmParams>(m.net), net_input);
    }

    // CSIP model file, little-endian:
    //   "CSIP" | u32 version | u32 kind (0 dnn, 1 lstm) | u32 P | u32 D | u32 T_CSI
    //   | f64 norm_mean | f64 norm_std | u64 n_params | n_params x f64
    // Parameters follow the flat layout documented on DenseParams / LstmParams.
    inline constexpr std::uint32_t csip_version = 1;

    inline void write_model(std::ostream &os, const PredictorModel &m)
    {
        binio::write_magic(os, "CSIP");
        binio::write<std::uint32_t>(os, csip_version);
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.kind));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.history_p));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.hidden()));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(m.t_csi));
        binio::write<double>(os, m.norm_mean);
        binio::write<double>(os, m.norm_std);
        const auto &p = m.params();
        binio::write<std::uint64_t>(os, p.size());
        for (double v : p)
            binio::write<double>(os, v);
    }

    inline PredictorModel read_model(std::istream &is)
    {
        binio::expect_magic(is, "CSIP");
        const auto version = binio::read<std::uint32_t>(is);
        if (version != csip_version)
            throw FormatError("unsupported CSIP version " + std::to_string(version));
        const auto kind = binio::read<std::uint32_t>(is);
        if (kind > 1)
            throw FormatError("unknown model kind " + std::to_string(kind));
        const auto p = binio::read<std::uint32_t>(is);
        const auto d = binio::read<std::uint32_t>(is);
        const auto t = binio::read<std::uint32_t>(is);
        PredictorModel m = make_model(static_cast<ModelKind>(kind), p, d, t);
        m.norm_mean = binio::read<double>(is);
        m.norm_std = binio::read<double>(is);
        const auto n = binio::read<std::uint64_t>(is);
        auto &data = m.params();
        if (n != data.size())
            throw FormatError("parameter count " + std::to_string(n) + " does not match dimensions (expected " + std::to_string(data.size()) + ")");
        for (auto &v : data)
            v = binio::read<double>(is);
        return m;
    }

    inline void save_model(const std::string &path, const PredictorModel &m)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + path + " for writing");
        write_model(os, m);
        if (!os)
            throw std::runtime_error("write failed: " + path);
    }

    inline PredictorModel load_model(const std::string &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("cannot open model " + path);
        return read_model(is);
    }
} // namespace csipred::nn

#endif // CSIPRED_NN_MODEL_HPP
