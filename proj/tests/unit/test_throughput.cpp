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


#include "csipred/harness/throughput.hpp"
#include "csipred/nn/train.hpp"

#include <catch_amalgamated.hpp>

using namespace csipred;

namespace
{
    ExperimentConfig small_config()
    {
        ExperimentConfig c;
        c.n_rb = 12;
        c.history_p = 3;
        c.slots_per_realization = 1000;
        c.allow_any_doppler = true;
        return c;
    }

    // Zero-weight model that always predicts `level` dB.
    nn::PredictorModel constant_model(const ExperimentConfig &cfg, nn::ModelKind kind, double level)
    {
        auto m = nn::make_model(kind, cfg.history_p, 2, cfg.t_csi);
        m.norm_mean = level;
        m.norm_std = 1.0;
        return m;
    }
} // namespace

TEST_CASE("report slots use the fresh report for every non-oracle policy", "[throughput]")
{
    const auto cfg = small_config();
    const auto lstm = constant_model(cfg, nn::ModelKind::lstm, 30.0);
    const auto dnn = constant_model(cfg, nn::ModelKind::dnn, -20.0);
    const auto r = simulate_throughput(cfg, TdlModel::A, 20.0, 3000, {Policy::stale, Policy::dnn, Policy::lstm, Policy::oracle}, {&dnn, &lstm}, true);
    const auto &st = r.at(Policy::stale).cqi_log;
    const auto &ls = r.at(Policy::lstm).cqi_log;
    const auto &dn = r.at(Policy::dnn).cqi_log;
    const auto &orc = r.at(Policy::oracle).cqi_log;
    REQUIRE(st.size() == 3000);
    std::size_t differ = 0;
    for (std::size_t q = 0; q < st.size(); ++q)
    {
        if (q % cfg.t_csi == 0)
        {
            CHECK(ls[q] == st[q]);
            CHECK(dn[q] == st[q]);
            CHECK(orc[q] == st[q]); // a fresh report is the truth
        }
        else
            differ += ls[q] != st[q];
    }
    CHECK(differ > 0);
    // A 30 dB prediction selects the top CQI once enough history exists.
    CHECK(ls[(cfg.history_p + 2) * cfg.t_csi + 1] == 15);
    CHECK(dn[(cfg.history_p + 2) * cfg.t_csi + 1] == 0);
    // Before P + 1 reports exist the predictive policies fall back to the stale value.
    CHECK(r.at(Policy::lstm).fallback_slots > 0);
    CHECK(ls[1] == st[1]);
}

TEST_CASE("zero Doppler makes stale CSI exact", "[throughput]")
{
    const auto cfg = small_config();
    const auto r = simulate_throughput(cfg, TdlModel::A, 0.0, 4000, {Policy::stale, Policy::oracle}, {}, true);
    CHECK(r.at(Policy::stale).cqi_log == r.at(Policy::oracle).cqi_log);
    CHECK(r.at(Policy::stale).delivered_bits == r.at(Policy::oracle).delivered_bits);
    CHECK(r.at(Policy::stale).throughput_mbps > 0.0);
}

TEST_CASE("oracle beats stale CSI under aging and accounting is bounded", "[throughput]")
{
    const auto cfg = small_config();
    const std::size_t n = 20000;
    const auto r = simulate_throughput(cfg, TdlModel::A, 30.0, n, {Policy::stale, Policy::oracle});
    const auto &st = r.at(Policy::stale);
    const auto &orc = r.at(Policy::oracle);
    CHECK(orc.throughput_mbps > st.throughput_mbps);
    const double cap = max_deliverable_bits(cfg, n);
    CHECK(cap == static_cast<double>(n) * 5.5547 * 4 * 12 * 168);
    for (const auto &o : r.outcomes)
    {
        CHECK(o.delivered_bits <= cap);
        CHECK(o.failures <= o.transmissions);
        CHECK(o.transmissions <= n);
        CHECK_THAT(o.throughput_mbps, Catch::Matchers::WithinRel(o.delivered_bits / (static_cast<double>(n) * 1e-3) / 1e6, 1e-12));
    }
    // Stale decisions lose more blocks than genie decisions.
    CHECK(static_cast<double>(st.failures) / static_cast<double>(st.transmissions) > static_cast<double>(orc.failures) / static_cast<double>(orc.transmissions));
}

TEST_CASE("throughput simulation is reproducible and paired", "[throughput]")
{
    const auto cfg = small_config();
    const auto a = simulate_throughput(cfg, TdlModel::D, 10.0, 2500, {Policy::stale, Policy::oracle}, {}, true);
    const auto b = simulate_throughput(cfg, TdlModel::D, 10.0, 2500, {Policy::oracle}, {}, true);
    // The oracle outcome does not depend on which other policies ran alongside.
    CHECK(a.at(Policy::oracle).cqi_log == b.at(Policy::oracle).cqi_log);
    CHECK(a.at(Policy::oracle).delivered_bits == b.at(Policy::oracle).delivered_bits);
    CHECK(run_throughput_sim(cfg, Policy::stale, 10.0, 2500) == run_throughput_sim(cfg, Policy::stale, 10.0, 2500));
}

TEST_CASE("throughput argument checks", "[throughput]")
{
    const auto cfg = small_config();
    CHECK_THROWS_AS(simulate_throughput(cfg, TdlModel::A, 10.0, 100, {Policy::lstm}), ConfigError);
    const auto wrong = nn::make_model(nn::ModelKind::lstm, cfg.history_p + 1, 2, cfg.t_csi);
    CHECK_THROWS_AS(run_throughput_sim(cfg, Policy::lstm, 10.0, 100, &wrong), DimensionError);
    CHECK_THROWS_AS(simulate_throughput(cfg, TdlModel::A, 10.0, 0, {Policy::stale}), ConfigError);
    const auto r = simulate_throughput(cfg, TdlModel::A, 10.0, 10, {Policy::stale});
    CHECK_THROWS_AS(r.at(Policy::oracle), std::out_of_range);
}
