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

#ifndef CSIPRED_HARNESS_SWEEP_HPP
#define CSIPRED_HARNESS_SWEEP_HPP

#include "csipred/harness/dataset.hpp"
#include "csipred/nn/train.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace csipred
{
    // One CSV row. Metrics that a given sweep does not measure stay empty.
    struct SweepRecord
    {
        std::string profile;
        double doppler_hz = 0.0;
        std::string model; // dnn, lstm, hold, or a throughput policy
        std::size_t hidden_d = 0;
        std::size_t history_p = 0;
        std::size_t t_csi = 0;
        std::optional<double> nmse_db;
        std::uint64_t flops = 0;
        std::optional<double> throughput_mbps;
        std::optional<double> baseline_mbps;
        std::uint64_t seed = 0;
    };

    using ProgressFn = std::function<void(const SweepRecord &)>;

    struct TrainedModel
    {
        nn::PredictorModel model;
        std::uint64_t seed = 0;
        double nmse_db = 0.0;
    };

    // Trains `kind` with cfg.n_train_seeds consecutive seeds on one dataset and
    // evaluates each model on the test split.
    inline std::vector<TrainedModel> train_and_evaluate(const ExperimentConfig &cfg, const DatasetSplit &data, nn::ModelKind kind, std::size_t hidden)
    {
        std::vector<TrainedModel> out(cfg.n_train_seeds);
        for (std::size_t k = 0; k < cfg.n_train_seeds; ++k)
        {
            const auto tc = cfg.train_config(k);
            auto rep = nn::train(kind, hidden, data, tc);
            out[k].nmse_db = evaluate_nmse(rep.model, data.test).model_db;
            out[k].seed = tc.seed;
            out[k].model = std::move(rep.model);
        }
        return out;
    }

    inline SweepRecord model_record(const ExperimentConfig &cfg, TdlModel profile, double doppler, const TrainedModel &m)
    {
        SweepRecord r;
        r.profile = to_string(profile);
        r.doppler_hz = doppler;
        r.model = nn::to_string(m.model.kind);
        r.hidden_d = m.model.hidden();
        r.history_p = cfg.history_p;
        r.t_csi = cfg.t_csi;
        r.nmse_db = m.nmse_db;
        r.flops = m.model.flops();
        r.seed = m.seed;
        return r;
    }

    inline SweepRecord hold_record(const ExperimentConfig &cfg, TdlModel profile, double doppler, const DatasetSplit &data)
    {
        SweepRecord r;
        r.profile = to_string(profile);
        r.doppler_hz = doppler;
        r.model = "hold";
        r.history_p = cfg.history_p;
        r.t_csi = cfg.t_csi;
        r.nmse_db = hold_nmse_db(data.test);
        r.seed = cfg.seed;
        return r;
    }

    // NMSE versus Doppler: for every (profile, Doppler) condition one dataset, the
    // hold baseline, and each model kind trained per training seed. Conditions run
    // in parallel with cfg.jobs workers and are merged in (profile, Doppler) order.
    inline std::vector<SweepRecord> run_nmse_sweep(const ExperimentConfig &cfg, const std::vector<nn::ModelKind> &kinds, std::size_t hidden, const ProgressFn &progress = {})
    {
        cfg.validate();
        struct Point
        {
            TdlModel profile;
            double doppler;
        };
        std::vector<Point> points;
        for (auto p : cfg.profiles)
            for (double f : cfg.doppler_list_hz)
                points.push_back({p, f});

        auto inner = cfg;
        inner.jobs = 1;
        std::vector<std::vector<SweepRecord>> parts(points.size());
        parallel_for(points.size(), cfg.jobs, [&](std::size_t i) {
            const auto &pt = points[i];
            const auto data = generate_dataset(inner, pt.profile, pt.doppler);
            parts[i].push_back(hold_record(inner, pt.profile, pt.doppler, data));
            for (auto kind : kinds)
                for (const auto &m : train_and_evaluate(inner, data, kind, hidden))
                    parts[i].push_back(model_record(inner, pt.profile, pt.doppler, m));
        });

        std::vector<SweepRecord> out;
        for (auto &p : parts)
            for (auto &r : p)
            {
                if (progress)
                    progress(r);
                out.push_back(std::move(r));
            }
        return out;
    }

    // NMSE and inference FLOPs versus hidden size on the single condition
    // (cfg.profile, cfg.doppler_hz).
    inline std::vector<SweepRecord> run_complexity_sweep(const ExperimentConfig &cfg, const std::vector<std::size_t> &d_list, const ProgressFn &progress = {})
    {
        cfg.validate();
        auto inner = cfg;
        inner.jobs = 1;
        const auto data = generate_dataset(inner, cfg.profile, cfg.doppler_hz);

        struct Point
        {
            nn::ModelKind kind;
            std::size_t d;
        };
        std::vector<Point> points;
        for (auto kind : cfg.model_kinds)
            for (auto d : d_list)
                points.push_back({kind, d});

        std::vector<std::vector<SweepRecord>> parts(points.size());
        parallel_for(points.size(), cfg.jobs, [&](std::size_t i) {
            for (const auto &m : train_and_evaluate(inner, data, points[i].kind, points[i].d))
                parts[i].push_back(model_record(inner, cfg.profile, cfg.doppler_hz, m));
        });

        std::vector<SweepRecord> out;
        for (auto &p : parts)
            for (auto &r : p)
            {
                if (progress)
                    progress(r);
                out.push_back(std::move(r));
            }
        return out;
    }
} // namespace csipred

#endif // CSIPRED_HARNESS_SWEEP_HPP
