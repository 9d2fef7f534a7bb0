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

#ifndef CSIPRED_LINK_CQI_TABLE_HPP
#define CSIPRED_LINK_CQI_TABLE_HPP

#include "csipred/common.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace csipred
{
    inline constexpr int max_cqi = 15;

    // Spectral efficiency (bits per RE) of CQI 1..15, 3GPP TS 38.214 Table 5.2.2.1-2.
    inline constexpr std::array<double, 15> nr_cqi_spectral_efficiency{
        0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
        2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547,
    };

    struct CqiEntry
    {
        int index = 0;
        double beta = 1.0;                // EESM calibration, linear SINR units
        double spectral_efficiency = 0.0; // bits per RE
        double bler_mid_db = 0.0;         // SINR at 50% BLER
        double bler_slope_db = 0.5;       // logistic width
    };

    struct CqiTable
    {
        std::vector<CqiEntry> entries;
        double bler_target = 0.1;

        const CqiEntry &entry(int cqi) const
        {
            if (cqi < 1 || cqi > static_cast<int>(entries.size()))
                throw std::out_of_range("CQI index " + std::to_string(cqi) + " out of range 1.." + std::to_string(entries.size()));
            return entries[static_cast<std::size_t>(cqi - 1)];
        }

        void validate() const
        {
            if (entries.size() != static_cast<std::size_t>(max_cqi))
                throw ConfigError("CQI table must have exactly 15 entries, found " + std::to_string(entries.size()));
            if (!(bler_target > 0.0 && bler_target < 1.0))
                throw ConfigError("bler_target must lie in (0, 1)");
            for (std::size_t i = 0; i < entries.size(); ++i)
            {
                const auto &e = entries[i];
                if (e.index != static_cast<int>(i) + 1)
                    throw ConfigError("CQI indices must be contiguous 1..15");
                if (!(e.beta > 0.0) || !(e.bler_slope_db > 0.0))
                    throw ConfigError("CQI " + std::to_string(e.index) + ": beta and slope must be positive");
                if (i > 0)
                {
                    const auto &prev = entries[i - 1];
                    if (!(e.spectral_efficiency > prev.spectral_efficiency) || !(e.bler_mid_db > prev.bler_mid_db))
                        throw ConfigError("CQI " + std::to_string(e.index) + ": spectral efficiency and BLER midpoint must increase with index");
                }
            }
        }
    };

    // Built-in table: NR spectral efficiencies, beta = max(0.25, SE), logistic BLER
    // midpoints every 1.9 dB from -6 dB with 0.5 dB width, 10% BLER target.
    inline CqiTable default_cqi_table()
    {
        CqiTable t;
        for (int i = 1; i <= max_cqi; ++i)
        {
            const double se = nr_cqi_spectral_efficiency[static_cast<std::size_t>(i - 1)];
            t.entries.push_back({i, std::max(0.25, se), se, -6.0 + 1.9 * (i - 1), 0.5});
        }
        t.bler_target = 0.1;
        return t;
    }

    // Parses the plain-text table: one "index beta se mid_db slope_db" line per CQI,
    // optional "bler_target = x" line, '#' starts a comment.
    inline CqiTable parse_cqi_table(std::istream &is)
    {
        CqiTable t;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line))
        {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            if (auto eq = line.find('='); eq != std::string::npos)
            {
                std::string key = line.substr(0, eq);
                key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
                if (key != "bler_target")
                    throw ConfigError("CQI table line " + std::to_string(lineno) + ": unknown key \"" + key + "\"");
                try
                {
                    t.bler_target = std::stod(line.substr(eq + 1));
                }
                catch (const std::exception &)
                {
                    throw ConfigError("CQI table line " + std::to_string(lineno) + ": bad bler_target");
                }
                continue;
            }
            std::istringstream ls(line);
            CqiEntry e;
            if (!(ls >> e.index >> e.beta >> e.spectral_efficiency >> e.bler_mid_db >> e.bler_slope_db))
                throw ConfigError("CQI table line " + std::to_string(lineno) + ": expected 'index beta se mid_db slope_db'");
            std::string extra;
            if (ls >> extra)
                throw ConfigError("CQI table line " + std::to_string(lineno) + ": trailing text \"" + extra + "\"");
            t.entries.push_back(e);
        }
        std::sort(t.entries.begin(), t.entries.end(), [](const CqiEntry &a, const CqiEntry &b) { return a.index < b.index; });
        t.validate();
        return t;
    }

    inline CqiTable load_cqi_table(const std::string &path)
    {
        std::ifstream is(path);
        if (!is)
            throw ConfigError("cannot open CQI table " + path);
        return parse_cqi_table(is);
    }

    inline std::string format_cqi_table(const CqiTable &t)
    {
        std::ostringstream os;
        os.precision(17);
        os << "# index beta se mid_db slope_db\n";
        os << "bler_target = " << t.bler_target << "\n";
        for (const auto &e : t.entries)
            os << e.index << ' ' << e.beta << ' ' << e.spectral_efficiency << ' ' << e.bler_mid_db << ' ' << e.bler_slope_db << '\n';
        return os.str();
    }

    // Logistic block error rate, decreasing in SINR: 1 far below the midpoint, 0 far above.
    inline double bler(double gamma_eff_db, const CqiEntry &entry)
    {
        return 1.0 / (1.0 + std::exp((gamma_eff_db - entry.bler_mid_db) / entry.bler_slope_db));
    }

    inline double spectral_efficiency(int cqi)
    {
        if (cqi < 0 || cqi > max_cqi)
            throw std::out_of_range("CQI index " + std::to_string(cqi) + " out of range 0..15");
        return cqi == 0 ? 0.0 : nr_cqi_spectral_efficiency[static_cast<std::size_t>(cqi - 1)];
    }

    inline double spectral_efficiency(const CqiTable &table, int cqi)
    {
        return cqi == 0 ? 0.0 : table.entry(cqi).spectral_efficiency;
    }
} // namespace csipred

#endif // CSIPRED_LINK_CQI_TABLE_HPP
