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

#ifndef CSIPRED_HARNESS_DATASET_HPP
#define CSIPRED_HARNESS_DATASET_HPP

#include "csipred/channel/fading.hpp"
#include "csipred/channel/mmse.hpp"
#include "csipred/harness/config.hpp"
#include "csipred/harness/parallel.hpp"
#include "csipred/link/eesm.hpp"
#include "csipred/predictor/windows.hpp"

#include <functional>
#include <vector>

namespace csipred
{
    // Seed streams. Channel realizations of different streams never share a seed.
    enum class SeedStream : std::uint64_t
    {
        train = 0,
        val = 1,
        test = 2,
        throughput_channel = 3,
        throughput_success = 4
    };

    inline std::uint64_t realization_seed(const ExperimentConfig &cfg, SeedStream stream, std::size_t index)
    {
        return derive_seed(cfg.seed, static_cast<std::uint64_t>(stream) + 1, index + 1);
    }

    inline FadingConfig fading_config(const ExperimentConfig &cfg, double doppler_hz, std::size_t n_slots, std::uint64_t seed)
    {
        FadingConfig f;
        f.doppler_hz = doppler_hz;
        f.n_slots = n_slots;
        f.slot_duration_s = cfg.slot_s();
        f.n_tx = cfg.n_tx;
        f.n_rx = cfg.n_rx;
        f.seed = seed;
        f.n_rb = cfg.n_rb;
        f.scs_hz = cfg.scs_hz;
        return f;
    }

    // Streams the true SINR grid of every slot of one realization to `fn(q, grid)`.
    inline void for_each_slot(const ExperimentConfig &cfg, const TapProfile &profile, double doppler_hz, std::uint64_t seed, std::size_t n_slots,
                              const std::function<void(std::size_t, const SinrGrid &)> &fn)
    {
        FadingChannel ch(profile, fading_config(cfg, doppler_hz, n_slots, seed));
        std::vector<cplx> h(cfg.n_rb * cfg.n_rx * cfg.n_tx);
        const double rho = cfg.snr_linear();
        for (std::size_t q = 0; q < n_slots; ++q)
        {
            if (q > 0)
                ch.advance();
            ch.frequency_response(h);
            fn(q, compute_sinr_grid(h, cfg.n_rb, cfg.n_rx, cfg.n_tx, rho, cfg.n_layers));
        }
    }

    // Effective SINR of the selected CQI for every slot of one realization.
    inline EffSinrTrace realization_trace(const ExperimentConfig &cfg, const TapProfile &profile, const CqiTable &table, double doppler_hz, std::uint64_t seed, std::size_t n_slots)
    {
        EffSinrTrace tr;
        tr.t_csi = cfg.t_csi;
        tr.doppler_hz = doppler_hz;
        tr.channel_profile = profile.name;
        tr.values_db.resize(n_slots);
        for_each_slot(cfg, profile, doppler_hz, seed, n_slots, [&](std::size_t q, const SinrGrid &g) { tr.values_db[q] = select_cqi(g, table).value_db; });
        return tr;
    }

    inline std::uint64_t dataset_hash(const DatasetSplit &d)
    {
        Fnv1a h;
        for (const auto *set : {&d.train, &d.val, &d.test})
        {
            h.update(static_cast<std::uint64_t>(set->size()));
            for (const auto &s : *set)
            {
                h.update(static_cast<std::uint64_t>(s.anchor_slot));
                for (double v : s.x)
                    h.update(v);
                for (double v : s.y)
                    h.update(v);
            }
        }
        return h.digest();
    }

    // Train/validation/test windows for one (profile, Doppler) condition. Each
    // split draws its realizations from its own seed stream; every realization
    // contributes all of its windows until the split reaches its configured size.
    inline DatasetSplit generate_dataset(const ExperimentConfig &cfg, TdlModel profile_name, double doppler_hz)
    {
        cfg.validate();
        const auto profile = load_tdl_profile(profile_name, cfg.delay_spread_ns);
        const auto table = cfg.cqi_table();
        const std::size_t len = cfg.slots_per_realization;
        const std::size_t per_real = window_count(len, cfg.history_p, cfg.t_csi);
        if (per_real == 0)
            throw ConfigError("slots_per_realization = " + std::to_string(len) + " yields no windows for history_p = " + std::to_string(cfg.history_p) + ", t_csi = " +
                              std::to_string(cfg.t_csi) + "; use at least " + std::to_string(min_trace_length(cfg.history_p, cfg.t_csi)) + " slots per realization");

        DatasetSplit out;
        out.provenance.profile = to_string(profile_name);
        out.provenance.doppler_hz = doppler_hz;
        out.provenance.config_hash = config_hash(cfg);

        auto fill = [&](SeedStream stream, std::size_t size, std::vector<WindowSample> &dst, std::vector<std::uint64_t> &seeds) {
            const std::size_t n_real = (size + per_real - 1) / per_real;
            seeds.resize(n_real);
            for (std::size_t r = 0; r < n_real; ++r)
                seeds[r] = realization_seed(cfg, stream, r);
            std::vector<std::vector<WindowSample>> parts(n_real);
            parallel_for(n_real, cfg.jobs, [&](std::size_t r) {
                const auto tr = realization_trace(cfg, profile, table, doppler_hz, seeds[r], len);
                parts[r] = build_windows(tr, cfg.history_p);
            });
            dst.reserve(size);
            for (auto &p : parts)
                for (auto &s : p)
                    if (dst.size() < size)
                        dst.push_back(std::move(s));
        };
        fill(SeedStream::train, cfg.train_size, out.train, out.provenance.train_seeds);
        fill(SeedStream::val, cfg.val_size, out.val, out.provenance.val_seeds);
        fill(SeedStream::test, cfg.test_size, out.test, out.provenance.test_seeds);
        return out;
    }
} // namespace csipred

#endif // CSIPRED_HARNESS_DATASET_HPP
