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


#include "csipred/harness/dataset.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace csipred;

namespace
{
    ExperimentConfig small_config()
    {
        ExperimentConfig c;
        c.train_size = 4000;
        c.val_size = 1000;
        c.test_size = 100;
        c.n_rb = 12;
        c.slots_per_realization = 1024;
        c.history_p = 4;
        return c;
    }
} // namespace

TEST_CASE("split sizes and seed hygiene", "[dataset]")
{
    const auto cfg = small_config();
    const auto d = generate_dataset(cfg, TdlModel::A, 10.0);
    CHECK(d.train.size() == 4000);
    CHECK(d.val.size() == 1000);
    CHECK(d.test.size() == 100);
    CHECK(d.provenance.profile == "TDL-A");
    CHECK(d.provenance.doppler_hz == 10.0);
    CHECK(d.provenance.config_hash == config_hash(cfg));

    std::set<std::uint64_t> all;
    std::size_t total = 0;
    for (const auto *seeds : {&d.provenance.train_seeds, &d.provenance.val_seeds, &d.provenance.test_seeds})
    {
        CHECK_FALSE(seeds->empty());
        all.insert(seeds->begin(), seeds->end());
        total += seeds->size();
    }
    CHECK(all.size() == total);

    for (const auto &s : d.train)
    {
        CHECK(s.x.size() == cfg.history_p + 1);
        CHECK(s.y.size() == cfg.t_csi - 1);
        CHECK(s.anchor_slot % cfg.t_csi == 0);
        for (double v : s.x)
            CHECK(std::isfinite(v));
    }
}

TEST_CASE("dataset generation is deterministic and seed-dependent", "[dataset]")
{
    auto cfg = small_config();
    cfg.train_size = 500;
    cfg.val_size = 200;
    cfg.test_size = 100;
    const auto a = dataset_hash(generate_dataset(cfg, TdlModel::A, 10.0));
    cfg.jobs = 3;
    const auto b = dataset_hash(generate_dataset(cfg, TdlModel::A, 10.0));
    CHECK(a == b);
    cfg.seed = 2;
    CHECK(dataset_hash(generate_dataset(cfg, TdlModel::A, 10.0)) != a);
    cfg.seed = 1;
    CHECK(dataset_hash(generate_dataset(cfg, TdlModel::D, 10.0)) != a);
}

TEST_CASE("frozen channel gives constant windows per realization", "[dataset]")
{
    auto cfg = small_config();
    cfg.allow_any_doppler = true;
    cfg.train_size = 300;
    cfg.val_size = 50;
    cfg.test_size = 50;
    cfg.slots_per_realization = 256;
    const auto d = generate_dataset(cfg, TdlModel::A, 0.0);
    const std::size_t per_real = window_count(256, cfg.history_p, cfg.t_csi);
    for (std::size_t i = 0; i < d.train.size(); ++i)
    {
        const double c = d.train[i - i % per_real].x.front();
        for (double v : d.train[i].x)
            CHECK(v == c);
        for (double v : d.train[i].y)
            CHECK(v == c);
    }
    CHECK(hold_nmse_db(d.test) == nmse_floor_db);
}

TEST_CASE("realization length too short for one window is a config error", "[dataset]")
{
    auto cfg = small_config();
    cfg.slots_per_realization = 10;
    CHECK_THROWS_AS(generate_dataset(cfg, TdlModel::A, 10.0), ConfigError);
    CHECK_THROWS_WITH(generate_dataset(cfg, TdlModel::A, 10.0), Catch::Matchers::ContainsSubstring("at least 20"));
}

TEST_CASE("realization seeds are distinct across streams", "[dataset]")
{
    ExperimentConfig cfg;
    std::set<std::uint64_t> seen;
    for (auto s : {SeedStream::train, SeedStream::val, SeedStream::test, SeedStream::throughput_channel, SeedStream::throughput_success})
        for (std::size_t i = 0; i < 500; ++i)
            seen.insert(realization_seed(cfg, s, i));
    CHECK(seen.size() == 2500);
}
