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

#ifndef CSIPRED_PREDICTOR_WINDOWS_HPP
#define CSIPRED_PREDICTOR_WINDOWS_HPP

#include "csipred/channel/tdl_profile.hpp"
#include "csipred/nn/model.hpp"
#include "csipred/predictor/window_sample.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <span>
#include <vector>

namespace csipred
{
    // Effective SINR (dB) of every slot of one channel realization.
    struct EffSinrTrace
    {
        std::vector<double> values_db;
        std::size_t t_csi = 4;
        double doppler_hz = 0.0;
        TdlModel channel_profile = TdlModel::A;
    };

    inline std::size_t min_trace_length(std::size_t p, std::size_t t_csi) { return (p + 1) * t_csi; }

    inline std::size_t window_count(std::size_t len, std::size_t p, std::size_t t_csi)
    {
        if (len < min_trace_length(p, t_csi))
            return 0;
        return (len - 1 - p * t_csi - (t_csi - 1)) / t_csi + 1;
    }

    // One sample per reporting instant n = p T, (p + 1) T, ... whose targets
    // n + 1 .. n + T - 1 fall inside the trace.
    inline std::vector<WindowSample> build_windows(std::span<const double> trace_db, std::size_t p, std::size_t t_csi)
    {
        if (t_csi < 2)
            throw ConfigError("build_windows: t_csi = " + std::to_string(t_csi) + " leaves no slots to predict (need t_csi >= 2)");
        const std::size_t need = min_trace_length(p, t_csi);
        if (trace_db.size() < need)
            throw std::invalid_argument("build_windows: trace has " + std::to_string(trace_db.size()) + " slots, need at least " + std::to_string(need));
        const std::size_t count = window_count(trace_db.size(), p, t_csi);
        std::vector<WindowSample> out(count);
        for (std::size_t w = 0; w < count; ++w)
        {
            const std::size_t n = (p + w) * t_csi;
            auto &s = out[w];
            s.anchor_slot = n;
            s.x.resize(p + 1);
            for (std::size_t k = 0; k <= p; ++k)
                s.x[k] = trace_db[n - k * t_csi];
            s.y.assign(trace_db.begin() + static_cast<std::ptrdiff_t>(n + 1), trace_db.begin() + static_cast<std::ptrdiff_t>(n + t_csi));
        }
        return out;
    }

    inline std::vector<WindowSample> build_windows(const EffSinrTrace &trace, std::size_t p)
    {
        return build_windows(trace.values_db, p, trace.t_csi);
    }

    // De-normalized dB predictions for slots n + 1 .. n + T - 1.
    inline std::vector<double> predict(const nn::PredictorModel &model, std::span<const double> x_newest_first)
    {
        if (x_newest_first.size() != model.input_size())
            throw DimensionError("predict: input window has " + std::to_string(x_newest_first.size()) + " entries, model expects " + std::to_string(model.input_size()) + " (P = " + std::to_string(model.history_p) + ")");
        std::vector<double> in;
        nn::network_input(model, x_newest_first, in);
        auto out = nn::forward_raw(model, in);
        for (auto &v : out)
            v = v * model.norm_std + model.norm_mean;
        return out;
    }

    // No-prediction policy: the newest report held until the next one.
    inline std::vector<double> hold_baseline(std::span<const double> x_newest_first, std::size_t t_csi)
    {
        if (x_newest_first.empty())
            throw std::invalid_argument("hold_baseline: empty input window");
        if (t_csi < 1)
            throw ConfigError("hold_baseline: t_csi must be >= 1");
        return std::vector<double>(t_csi - 1, x_newest_first.front());
    }

    inline constexpr double nmse_floor_db = -100.0;

    // 10 log10( sum |y - yhat|^2 / sum |y|^2 ) pooled over all entries, floored at -100 dB.
    inline double nmse_db(std::span<const std::vector<double>> preds, std::span<const std::vector<double>> targets)
    {
        if (preds.size() != targets.size())
            throw DimensionError("nmse_db: " + std::to_string(preds.size()) + " predictions vs " + std::to_string(targets.size()) + " targets");
        double err = 0.0, energy = 0.0;
        for (std::size_t i = 0; i < preds.size(); ++i)
        {
            if (preds[i].size() != targets[i].size())
                throw DimensionError("nmse_db: prediction and target lengths differ at sample " + std::to_string(i));
            for (std::size_t k = 0; k < preds[i].size(); ++k)
            {
                const double e = targets[i][k] - preds[i][k];
                err += e * e;
                energy += targets[i][k] * targets[i][k];
            }
        }
        if (!(energy > 0.0))
            throw std::domain_error("nmse_db: targets have zero energy, normalization undefined");
        if (err <= 0.0)
            return nmse_floor_db;
        return std::max(nmse_floor_db, 10.0 * std::log10(err / energy));
    }

    struct NmseResult
    {
        double model_db = 0.0;
        double hold_db = 0.0;
    };

    // NMSE of a model and of the hold baseline over the same samples.
    inline NmseResult evaluate_nmse(const nn::PredictorModel &model, std::span<const WindowSample> samples)
    {
        std::vector<std::vector<double>> pred, hold, tgt;
        pred.reserve(samples.size());
        hold.reserve(samples.size());
        tgt.reserve(samples.size());
        for (const auto &s : samples)
        {
            pred.push_back(predict(model, s.x));
            hold.push_back(hold_baseline(s.x, s.y.size() + 1));
            tgt.push_back(s.y);
        }
        return {nmse_db(pred, tgt), nmse_db(hold, tgt)};
    }

    inline double hold_nmse_db(std::span<const WindowSample> samples)
    {
        std::vector<std::vector<double>> hold, tgt;
        for (const auto &s : samples)
        {
            hold.push_back(hold_baseline(s.x, s.y.size() + 1));
            tgt.push_back(s.y);
        }
        return nmse_db(hold, tgt);
    }

    // WSMP binary: "WSMP" | u32 version | u32 n_samples | u32 P | u32 T_CSI |
    // per sample (P + 1) f64 x then (T_CSI - 1) f64 y, little-endian.
    inline constexpr std::uint32_t wsmp_version = 1;

    inline void write_windows(std::ostream &os, std::span<const WindowSample> samples, std::size_t p, std::size_t t_csi)
    {
        binio::write_magic(os, "WSMP");
        binio::write<std::uint32_t>(os, wsmp_version);
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(samples.size()));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(p));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(t_csi));
        for (const auto &s : samples)
        {
            if (s.x.size() != p + 1 || s.y.size() + 1 != t_csi)
                throw DimensionError("write_windows: sample dimensions do not match header");
            for (double v : s.x)
                binio::write<double>(os, v);
            for (double v : s.y)
                binio::write<double>(os, v);
        }
    }

    struct WindowFile
    {
        std::size_t p = 0;
        std::size_t t_csi = 0;
        std::vector<WindowSample> samples;
    };

    inline WindowFile read_windows(std::istream &is)
    {
        binio::expect_magic(is, "WSMP");
        const auto version = binio::read<std::uint32_t>(is);
        if (version != wsmp_version)
            throw FormatError("unsupported WSMP version " + std::to_string(version));
        WindowFile f;
        const auto n = binio::read<std::uint32_t>(is);
        f.p = binio::read<std::uint32_t>(is);
        f.t_csi = binio::read<std::uint32_t>(is);
        if (f.t_csi < 1)
            throw FormatError("WSMP: t_csi must be >= 1");
        f.samples.resize(n);
        for (auto &s : f.samples)
        {
            s.x.resize(f.p + 1);
            s.y.resize(f.t_csi - 1);
            for (auto &v : s.x)
                v = binio::read<double>(is);
            for (auto &v : s.y)
                v = binio::read<double>(is);
        }
        return f;
    }

    // Debug CSV: anchor_slot, x0..xP (newest first), y1..y{T-1}.
    inline void write_windows_csv(std::ostream &os, std::span<const WindowSample> samples)
    {
        if (samples.empty())
            return;
        os << "anchor_slot";
        for (std::size_t k = 0; k < samples.front().x.size(); ++k)
            os << ",x" << k;
        for (std::size_t k = 0; k < samples.front().y.size(); ++k)
            os << ",y" << (k + 1);
        os << '\n';
        os << std::setprecision(17);
        for (const auto &s : samples)
        {
            os << s.anchor_slot;
            for (double v : s.x)
                os << ',' << v;
            for (double v : s.y)
                os << ',' << v;
            os << '\n';
        }
    }
} // namespace csipred

#endif // CSIPRED_PREDICTOR_WINDOWS_HPP
