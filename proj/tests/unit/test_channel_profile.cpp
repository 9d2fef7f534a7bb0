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


#include "csipred/channel/tdl_profile.hpp"

#include <catch_amalgamated.hpp>

#include <numeric>

using namespace csipred;
using Catch::Matchers::WithinAbs;

namespace
{
    double total_power(const TapProfile &p)
    {
        double s = 0.0;
        for (std::size_t l = 0; l < p.taps.size(); ++l)
            s += p.power_linear(l);
        return s;
    }

    void check_invariants(const TapProfile &p)
    {
        CHECK_THAT(total_power(p), WithinAbs(1.0, 1e-9));
        for (std::size_t l = 0; l < p.taps.size(); ++l)
        {
            CHECK(p.taps[l].normalized_delay >= 0.0);
            if (l > 0)
                CHECK(p.taps[l].normalized_delay > p.taps[l - 1].normalized_delay);
        }
    }
} // namespace

TEST_CASE("TDL-A has 23 unit-power NLOS taps", "[profile]")
{
    const auto p = load_tdl_profile(TdlModel::A, 300.0);
    CHECK(p.name == TdlModel::A);
    CHECK(p.taps.size() == 23);
    check_invariants(p);
    for (const auto &t : p.taps)
        CHECK_FALSE(t.is_los);
    // Strongest tap is the 0 dB entry at normalized delay 0.3819.
    auto strongest = std::max_element(p.taps.begin(), p.taps.end(), [](const Tap &a, const Tap &b) { return a.power_db < b.power_db; });
    CHECK_THAT(strongest->normalized_delay, WithinAbs(0.3819, 1e-12));
    CHECK_THAT(p.delay_s(p.taps.size() - 1), WithinAbs(9.6586 * 300e-9, 1e-18));
}

TEST_CASE("TDL-D has a single leading LOS tap with K = 13.3 dB", "[profile]")
{
    const auto p = load_tdl_profile(TdlModel::D, 300.0);
    CHECK(p.taps.size() == 13);
    check_invariants(p);
    CHECK(p.taps.front().is_los);
    CHECK(std::count_if(p.taps.begin(), p.taps.end(), [](const Tap &t) { return t.is_los; }) == 1);
    CHECK(p.k_factor_db == 13.3);
    // Merged tap 1 carries 10^-0.02 + 10^-1.35 of the raw table power.
    double raw_total = db_to_linear(-0.2) + db_to_linear(-13.5);
    for (double db : {-18.8, -21.0, -22.8, -17.9, -20.1, -21.9, -22.9, -27.8, -23.6, -24.8, -30.0, -27.7})
        raw_total += db_to_linear(db);
    CHECK_THAT(p.power_linear(0), WithinAbs((db_to_linear(-0.2) + db_to_linear(-13.5)) / raw_total, 1e-12));
}

TEST_CASE("delay spread scales delays linearly and keeps powers", "[profile]")
{
    const auto a300 = load_tdl_profile(TdlModel::A, 300.0);
    const auto a1 = load_tdl_profile(TdlModel::A, 1.0);
    REQUIRE(a1.taps.size() == a300.taps.size());
    for (std::size_t l = 0; l < a1.taps.size(); ++l)
    {
        CHECK(a1.delay_s(l) < 10e-9);
        CHECK_THAT(a1.delay_s(l) * 300.0, WithinAbs(a300.delay_s(l), 1e-18));
        CHECK(a1.taps[l].power_db == a300.taps[l].power_db);
    }
}

TEST_CASE("profile names parse and bad inputs are rejected", "[profile]")
{
    CHECK(parse_tdl_model("TDL-A") == TdlModel::A);
    CHECK(parse_tdl_model("tdl-d") == TdlModel::D);
    CHECK(parse_tdl_model("D") == TdlModel::D);
    CHECK(load_tdl_profile("TDL-D", 100.0).name == TdlModel::D);
    CHECK_THROWS_AS(load_tdl_profile("TDL-C", 300.0), ConfigError);
    CHECK_THROWS_AS(load_tdl_profile(TdlModel::A, 0.0), ConfigError);
    CHECK_THROWS_AS(load_tdl_profile(TdlModel::A, -5.0), ConfigError);
    CHECK(to_string(TdlModel::A) == "TDL-A");
}
