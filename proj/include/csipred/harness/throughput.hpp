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

#ifndef CSIPRED_HARNESS_THROUGHPUT_HPP
#define CSIPRED_HARNESS_THROUGHPUT_HPP

#include "csipred/harness/dataset.hpp"
#include "csipred/predictor/windows.hpp"

#include <map>
#include <optional>
#include <random>
#include <vector>

namespace csipred
{
    inline constexpr std::size_t subcarriers_per_rb = 12;
    inline constexpr std::size_t symbols_per_slot = 14;

    struct PolicyOutcome
    {
        Policy policy = Policy::stale;
        double delivered_bits = 0.0;
        std::size_t transmissions = 0;
        std::size_t failures = 0;
        std::size_t fallback_slots = 0; // predictive slots without enough history
        double throughput_mbps = 0.0;
        std::vector<int> cqi_log; // per slot, only when requested
    };

    struct ThroughputResult
    {
        std::size_t n_slots = 0;
        std::vector<PolicyOutcome> outcomes;

        const PolicyOutcome &at(Policy p) const
        {
            for (const auto &o : outcomes)
                if (o.policy == p)
                    return o;
            throw std::out_of_range("policy " + to_string(p) + " was not simulated");
        }
    };

    struct ThroughputModels
    {
        const nn::PredictorModel *dnn = nullptr;
        const nn::PredictorModel *lstm = nullptr;
    };

    // Slot-level link simulation of several CQI policies over the same channel
    // realizations and the same success draws (one uniform per slot), so policies
    // are compared on paired randomness.
    //
    // Per slot q with last report n = floor(q / T) T:
    //   stale      - the reported effective SINR g(n)
    //   dnn, lstm  - g(n) at report slots, otherwise the model's prediction for q
    //                made at n; falls back to g(n) while fewer than P past reports exist
    //   oracle     - the CQI selected from the true SINR grid of slot q
    // The chosen CQI c succeeds with probability 1 - BLER(true EESM with beta_c, c)
    // and then delivers SE(c) * N_L * N_RB * 12 * 14 bits.
    inline ThroughputResult simulate_throughput(const ExperimentConfig &cfg, TdlModel profile_name, double doppler_hz, std::size_t n_slots, const std::vector<Policy> &policies,
                                                ThroughputModels models = {}, bool log_cqi = false)
    {
        cfg.validate();
        if (n_slots < 1)
            throw ConfigError("throughput: n_slots must be >= 1");
        for (auto p : policies)
        {
            const auto *m = p == Policy::dnn ? models.dnn : p == Policy::lstm ? models.lstm : nullptr;
            if ((p == Policy::dnn || p == Policy::lstm) && m == nullptr)
                throw ConfigError("throughput: policy " + to_string(p) + " needs a trained model");
            if (m && (m->t_csi != cfg.t_csi || m->history_p != cfg.history_p))
                throw DimensionError("throughput: model expects P = " + std::to_string(m->history_p) + ", T_CSI = " + std::to_string(m->t_csi) + " but the configuration has P = " +
                                     std::to_string(cfg.history_p) + ", T_CSI = " + std::to_string(cfg.t_csi));
        }

        const auto profile = load_tdl_profile(profile_name, cfg.delay_spread_ns);
        const auto table = cfg.cqi_table();
        const std::size_t T = cfg.t_csi;
        const std::size_t P = cfg.history_p;
        const std::size_t len = cfg.slots_per_realization;
        const double bits_per_se = static_cast<double>(cfg.n_layers * cfg.n_rb * subcarriers_per_rb * symbols_per_slot);

        ThroughputResult res;
        res.n_slots = n_slots;
        for (auto p : policies)
        {
            PolicyOutcome o;
            o.policy = p;
            if (log_cqi)
                o.cqi_log.reserve(n_slots);
            res.outcomes.push_back(std::move(o));
        }

        std::vector<double> reports; // g at report slots of the current realization
        std::vector<double> window(P + 1);
        std::map<Policy, std::vector<double>> predictions;

        const std::size_t n_real = (n_slots + len - 1) / len;
        for (std::size_t r = 0; r < n_real; ++r)
        {
            const std::size_t slots = std::min(len, n_slots - r * len);
            std::mt19937_64 success_rng(realization_seed(cfg, SeedStream::throughput_success, r));
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            reports.clear();
            predictions.clear();

            for_each_slot(cfg, profile, doppler_hz, realization_seed(cfg, SeedStream::throughput_channel, r), slots, [&](std::size_t q, const SinrGrid &grid) {
                const auto truth = select_cqi(grid, table);
                const std::size_t offset = q % T;
                if (offset == 0)
                {
                    reports.push_back(truth.value_db);
                    predictions.clear();
                    const std::size_t nr = reports.size();
                    if (nr >= P + 1)
                    {
                        for (std::size_t k = 0; k <= P; ++k)
                            window[k] = reports[nr - 1 - k];
                        if (models.dnn)
                            predictions[Policy::dnn] = predict(*models.dnn, window);
                        if (models.lstm)
                            predictions[Policy::lstm] = predict(*models.lstm, window);
                    }
                }
                const double last_report = reports.back();
                const double u = unif(success_rng);

                for (auto &o : res.outcomes)
                {
                    int cqi = 0;
                    switch (o.policy)
                    {
                    case Policy::oracle:
                        cqi = truth.cqi;
                        break;
                    case Policy::stale:
                        cqi = select_cqi_for_value(last_report, table);
                        break;
                    case Policy::dnn:
                    case Policy::lstm:
                        if (offset == 0)
                            cqi = select_cqi_for_value(last_report, table);
                        else if (auto it = predictions.find(o.policy); it != predictions.end())
                            cqi = select_cqi_for_value(it->second[offset - 1], table);
                        else
                        {
                            cqi = select_cqi_for_value(last_report, table);
                            ++o.fallback_slots;
                        }
                        break;
                    }
                    if (log_cqi)
                        o.cqi_log.push_back(cqi);
                    if (cqi == 0)
                        continue;
                    const auto &entry = table.entry(cqi);
                    ++o.transmissions;
                    const double p_err = bler(linear_to_db(eesm(grid, entry.beta)), entry);
                    if (u < 1.0 - p_err)
                        o.delivered_bits += entry.spectral_efficiency * bits_per_se;
                    else
                        ++o.failures;
                }
            });
        }

        const double duration_s = static_cast<double>(n_slots) * cfg.slot_s();
        for (auto &o : res.outcomes)
            o.throughput_mbps = o.delivered_bits / duration_s / 1e6;
        return res;
    }

    inline double run_throughput_sim(const ExperimentConfig &cfg, Policy policy, double doppler_hz, std::size_t n_slots, const nn::PredictorModel *model = nullptr)
    {
        ThroughputModels models;
        if (policy == Policy::dnn)
            models.dnn = model;
        if (policy == Policy::lstm)
            models.lstm = model;
        return simulate_throughput(cfg, cfg.profile, doppler_hz, n_slots, {policy}, models).at(policy).throughput_mbps;
    }

    // Upper bound on delivered bits: every slot at the top CQI without errors.
    inline double max_deliverable_bits(const ExperimentConfig &cfg, std::size_t n_slots)
    {
        const auto table = cfg.cqi_table();
        return static_cast<double>(n_slots) * table.entries.back().spectral_efficiency * static_cast<double>(cfg.n_layers * cfg.n_rb * subcarriers_per_rb * symbols_per_slot);
    }
} // namespace csipred

#endif // CSIPRED_HARNESS_THROUGHPUT_HPP
