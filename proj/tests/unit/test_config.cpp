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


#include "csipred/harness/config.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace csipred;

TEST_CASE("defaults carry the reference link parameters", "[config]")
{
    const ExperimentConfig c;
    CHECK(c.snr_db == 12.5);
    CHECK(c.n_rb == 52);
    CHECK(c.scs_hz == 15e3);
    CHECK(c.bandwidth_mhz == 10.0);
    CHECK(c.delay_spread_ns == 300.0);
    CHECK(c.n_tx == 4);
    CHECK(c.n_rx == 4);
    CHECK(c.n_layers == 4);
    CHECK(c.t_csi == 4);
    CHECK(c.slot_ms == 1.0);
    CHECK(c.profiles == std::vector<TdlModel>{TdlModel::A, TdlModel::D});
    CHECK(c.train_size == 40000);
    CHECK(c.val_size == 10000);
    CHECK(c.test_size == 2000);
    CHECK(c.epochs == 200);
    CHECK(c.batch_size == 256);
    CHECK(c.history_p == 8);
    CHECK(c.d_list == std::vector<std::size_t>{2, 4, 8, 16, 32});
    CHECK_NOTHROW(c.validate());
    CHECK_THAT(c.snr_linear(), Catch::Matchers::WithinRel(std::pow(10.0, 1.25), 1e-15));
}

TEST_CASE("config text parsing with comments and lists", "[config]")
{
    std::istringstream is(R"(# experiment
snr_db = 10     # lower SNR
profiles = TDL-D
doppler_list_hz = 5, 10 ,20

model_kinds = lstm
d_list = 2,8,32
allow_any_doppler = yes
policy = oracle
)");
    const auto c = parse_config(is);
    CHECK(c.snr_db == 10.0);
    CHECK(c.profiles == std::vector<TdlModel>{TdlModel::D});
    CHECK(c.doppler_list_hz == std::vector<double>{5.0, 10.0, 20.0});
    CHECK(c.model_kinds == std::vector<nn::ModelKind>{nn::ModelKind::lstm});
    CHECK(c.d_list == std::vector<std::size_t>{2, 8, 32});
    CHECK(c.allow_any_doppler);
    CHECK(c.policy == Policy::oracle);
    CHECK(c.n_rb == 52); // untouched keys keep defaults
}

TEST_CASE("bad configuration is reported with its line", "[config]")
{
    auto parse = [](const std::string &s) {
        std::istringstream is(s);
        return parse_config(is);
    };
    CHECK_THROWS_AS(parse("nonsense_key = 3\n"), ConfigError);
    CHECK_THROWS_WITH(parse("snr_db = 3\nn_rb = many\n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parse("snr_db 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("profiles = TDL-B\n"), ConfigError);
    CHECK_THROWS_AS(parse("model_kind = gru\n"), ConfigError);
    CHECK_THROWS_AS(parse("policy = greedy\n"), ConfigError);
    CHECK_THROWS_AS(parse("n_rb = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse("allow_any_doppler = perhaps\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/experiment.cfg"), ConfigError);
}

TEST_CASE("validation enforces ranges", "[config]")
{
    ExperimentConfig c;
    c.doppler_list_hz = {0.0, 10.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.allow_any_doppler = true;
    CHECK_NOTHROW(c.validate());
    c = {};
    c.doppler_hz = 45.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.t_csi = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.n_layers = 5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.train_size = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.d_list.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("overrides and canonical dump", "[config]")
{
    ExperimentConfig c;
    apply_override(c, "doppler_list_hz=5,10,20");
    apply_override(c, " hidden_d = 32 ");
    CHECK(c.doppler_list_hz == std::vector<double>{5.0, 10.0, 20.0});
    CHECK(c.hidden_d == 32);
    CHECK_THROWS_AS(apply_override(c, "hidden_d"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "bogus=1"), ConfigError);

    c.snr_db = 0.1 + 0.2; // needs full precision to round-trip
    c.profile = TdlModel::D;
    c.model_path = "m.csip";
    const auto text = dump_config(c);
    std::istringstream is(text);
    const auto back = parse_config(is);
    CHECK(dump_config(back) == text);
    CHECK(back.snr_db == c.snr_db);
    CHECK(config_hash(back) == config_hash(c));
    ExperimentConfig d = c;
    d.seed = 99;
    CHECK(config_hash(d) != config_hash(c));

    // Every registered key appears exactly once, in sorted order.
    std::vector<std::string> keys;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);)
        keys.push_back(line.substr(0, line.find(" = ")));
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
    CHECK(keys.size() == detail::config_keys().size());
}

TEST_CASE("config files load from disk", "[config]")
{
    const auto path = std::filesystem::temp_directory_path() / "csipred_cfg_test.cfg";
    {
        std::ofstream os(path);
        os << "t_csi = 6\nprofile = TDL-D\n";
    }
    const auto c = load_config(path.string());
    CHECK(c.t_csi == 6);
    CHECK(c.profile == TdlModel::D);
    std::filesystem::remove(path);
}

TEST_CASE("shipped example configurations parse", "[config]")
{
    const std::filesystem::path dir = CSIPRED_SOURCE_DIR "/configs";
    // desk.cfg spells out every key at its default.
    CHECK(dump_config(load_config((dir / "desk.cfg").string())) == dump_config(ExperimentConfig{}));
    const auto tiny = load_config((dir / "tiny.cfg").string());
    CHECK_NOTHROW(tiny.validate());
    CHECK(tiny.n_rb == 6);
}
