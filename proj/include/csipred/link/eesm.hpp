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

#ifndef CSIPRED_LINK_EESM_HPP
#define CSIPRED_LINK_EESM_HPP

#include "csipred/channel/mmse.hpp"
#include "csipred/link/cqi_table.hpp"

#include <algorithm>
#include <span>

namespace csipred
{
    // Exponent arguments below this are treated as exp(.) = 0.
    inline constexpr double eesm_exp_floor = -700.0;

    // Exponential effective SINR mapping over all entries of `gamma` (linear units):
    //   -beta ln( mean_k exp(-gamma_k / beta) )
    // Evaluated relative to the smallest SINR so the sum never underflows to zero,
    // and with expm1/log1p so the large-beta limit keeps full precision.
    inline double eesm(std::span<const double> gamma, double beta)
    {
        if (gamma.empty())
            throw std::invalid_argument("eesm: empty SINR grid");
        if (!(beta > 0.0))
            throw std::invalid_argument("eesm: beta must be positive");
        const double gmin = *std::min_element(gamma.begin(), gamma.end());
        double acc = 0.0; // sum of expm1(-(g - gmin)/beta), each in (-1, 0]
        for (double g : gamma)
        {
            const double a = -(g - gmin) / beta;
            acc += a < eesm_exp_floor ? -1.0 : std::expm1(a);
        }
        const double m = acc / static_cast<double>(gamma.size());
        return gmin - beta * std::log1p(m);
    }

    inline double eesm(const SinrGrid &grid, double beta) { return eesm(std::span<const double>(grid.gamma), beta); }

    struct EffectiveSinr
    {
        double value_db = 0.0;
        int cqi = 0; // 0: no feasible CQI
    };

    // Highest CQI whose own effective SINR meets the BLER target. With no feasible
    // entry, returns CQI 0 and the effective SINR computed with the CQI-1 beta.
    // The search runs top-down and stops at the first feasible entry, which is the
    // maximum of the feasible set.
    inline EffectiveSinr select_cqi(const SinrGrid &grid, const CqiTable &table)
    {
        for (int i = static_cast<int>(table.entries.size()); i >= 1; --i)
        {
            const auto &e = table.entry(i);
            const double g_db = linear_to_db(eesm(grid, e.beta));
            if (bler(g_db, e) <= table.bler_target)
                return {g_db, i};
        }
        return {linear_to_db(eesm(grid, table.entry(1).beta)), 0};
    }

    // CQI decision from a single effective-SINR value (a report, a prediction or a
    // stale value), treating it as the effective SINR of every candidate.
    inline int select_cqi_for_value(double gamma_eff_db, const CqiTable &table)
    {
        for (int i = static_cast<int>(table.entries.size()); i >= 1; --i)
            if (bler(gamma_eff_db, table.entry(i)) <= table.bler_target)
                return i;
        return 0;
    }
} // namespace csipred

#endif // CSIPRED_LINK_EESM_HPP
