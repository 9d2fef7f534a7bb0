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

#ifndef CSIPRED_CHANNEL_TDL_PROFILE_HPP
#define CSIPRED_CHANNEL_TDL_PROFILE_HPP

#include "csipred/common.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace csipred
{
    enum class TdlModel
    {
        A,
        D
    };

    inline std::string to_string(TdlModel m) { return m == TdlModel::A ? "TDL-A" : "TDL-D"; }

    // Accepts "TDL-A", "tdl-a", "A" and so on.
    inline TdlModel parse_tdl_model(std::string_view name)
    {
        std::string s;
        for (char c : name)
            if (c != '-' && c != '_' && c != ' ')
                s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        if (s == "TDLA" || s == "A")
            return TdlModel::A;
        if (s == "TDLD" || s == "D")
            return TdlModel::D;
        throw ConfigError("unsupported channel profile \"" + std::string(name) + "\" (expected TDL-A or TDL-D)");
    }

    struct Tap
    {
        double normalized_delay = 0.0; // in units of the delay spread
        double power_db = 0.0;         // total tap power after normalization
        bool is_los = false;
    };

    struct TapProfile
    {
        TdlModel name = TdlModel::A;
        std::vector<Tap> taps;
        double k_factor_db = 0.0; // Rician K of the first tap, TDL-D only
        double delay_spread_ns = 0.0;

        double delay_s(std::size_t l) const { return taps[l].normalized_delay * delay_spread_ns * 1e-9; }
        double power_linear(std::size_t l) const { return db_to_linear(taps[l].power_db); }
    };

    namespace detail
    {
        struct TapRow
        {
            double delay;
            double power_db;
        };

        // 3GPP TR 38.901 Table 7.7.2-1 (TDL-A), listed in table order.
        inline constexpr std::array<TapRow, 23> tdl_a_rows{{
            {0.0000, -13.4}, {0.3819, 0.0},   {0.4025, -2.2},  {0.5868, -4.0},  {0.4610, -6.0},  {0.5375, -8.2},
            {0.6708, -9.9},  {0.5750, -10.5}, {0.7618, -7.5},  {1.5375, -15.9}, {1.8978, -6.6},  {2.2242, -16.7},
            {2.1718, -12.4}, {2.4942, -15.2}, {2.5119, -10.8}, {3.0582, -11.3}, {4.0810, -12.7}, {4.4579, -16.2},
            {4.5695, -18.3}, {4.7966, -18.9}, {5.0066, -16.6}, {5.3043, -19.9}, {9.6586, -29.7},
        }};

        // 3GPP TR 38.901 Table 7.7.2-4 (TDL-D). Row 0 is the specular LOS part of tap 1,
        // row 1 the Rayleigh part of tap 1; both share delay 0.
        inline constexpr std::array<TapRow, 14> tdl_d_rows{{
            {0.0, -0.2},     {0.0, -13.5},    {0.035, -18.8},  {0.612, -21.0},  {1.363, -22.8},
            {1.405, -17.9},  {1.804, -20.1},  {2.596, -21.9},  {1.775, -22.9},  {4.042, -27.8},
            {7.937, -23.6},  {9.424, -24.8},  {9.708, -30.0},  {12.525, -27.7},
        }};

        inline constexpr double tdl_d_k_factor_db = 13.3;
    } // namespace detail

    // Builds a unit-power tap profile. Taps are sorted by delay (the standard tables
    // list a few taps out of order); TDL-D merges the LOS and Rayleigh parts of tap 1
    // into a single Rician tap.
    inline TapProfile load_tdl_profile(TdlModel name, double delay_spread_ns)
    {
        if (!(delay_spread_ns > 0.0) || !std::isfinite(delay_spread_ns))
            throw ConfigError("delay spread must be positive");

        TapProfile p;
        p.name = name;
        p.delay_spread_ns = delay_spread_ns;

        std::vector<Tap> taps;
        switch (name)
        {
        case TdlModel::A:
            for (const auto &r : detail::tdl_a_rows)
                taps.push_back({r.delay, r.power_db, false});
            break;
        case TdlModel::D:
        {
            const double los = db_to_linear(detail::tdl_d_rows[0].power_db);
            const double ray = db_to_linear(detail::tdl_d_rows[1].power_db);
            taps.push_back({0.0, linear_to_db(los + ray), true});
            for (std::size_t i = 2; i < detail::tdl_d_rows.size(); ++i)
                taps.push_back({detail::tdl_d_rows[i].delay, detail::tdl_d_rows[i].power_db, false});
            p.k_factor_db = detail::tdl_d_k_factor_db;
            break;
        }
        default:
            throw ConfigError("unsupported channel profile");
        }

        std::stable_sort(taps.begin(), taps.end(), [](const Tap &a, const Tap &b) { return a.normalized_delay < b.normalized_delay; });

        double total = 0.0;
        for (const auto &t : taps)
            total += db_to_linear(t.power_db);
        const double offset_db = linear_to_db(total);
        for (auto &t : taps)
            t.power_db -= offset_db;

        p.taps = std::move(taps);
        return p;
    }

    inline TapProfile load_tdl_profile(std::string_view name, double delay_spread_ns)
    {
        return load_tdl_profile(parse_tdl_model(name), delay_spread_ns);
    }
} // namespace csipred

#endif // CSIPRED_CHANNEL_TDL_PROFILE_HPP
