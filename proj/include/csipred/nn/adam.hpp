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

#ifndef CSIPRED_NN_ADAM_HPP
#define CSIPRED_NN_ADAM_HPP

#include "csipred/common.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace csipred::nn
{
    struct AdamConfig
    {
        double learning_rate = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
    };

    class Adam
    {
      public:
        Adam(std::size_t n, AdamConfig cfg) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

        void step(std::span<double> params, std::span<const double> grad)
        {
            if (params.size() != m_.size() || grad.size() != m_.size())
                throw DimensionError("adam: parameter count changed");
            ++t_;
            const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
            const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
            for (std::size_t i = 0; i < params.size(); ++i)
            {
                m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
                v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
                const double mh = m_[i] / c1;
                const double vh = v_[i] / c2;
                params[i] -= cfg_.learning_rate * mh / (std::sqrt(vh) + cfg_.eps);
            }
        }

        std::size_t steps() const { return t_; }

      private:
        AdamConfig cfg_;
        std::vector<double> m_;
        std::vector<double> v_;
        std::size_t t_ = 0;
    };
} // namespace csipred::nn

#endif // CSIPRED_NN_ADAM_HPP
