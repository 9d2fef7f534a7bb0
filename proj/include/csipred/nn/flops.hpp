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

#ifndef CSIPRED_NN_FLOPS_HPP
#define CSIPRED_NN_FLOPS_HPP

#include "csipred/common.hpp"

#include <cstdint>
#include <string>

namespace csipred::nn
{
    enum class ModelKind : std::uint32_t
    {
        dnn = 0,
        lstm = 1
    };

    inline std::string to_string(ModelKind k) { return k == ModelKind::dnn ? "dnn" : "lstm"; }

    inline ModelKind parse_model_kind(std::string_view s)
    {
        if (s == "dnn" || s == "DNN")
            return ModelKind::dnn;
        if (s == "lstm" || s == "LSTM")
            return ModelKind::lstm;
        throw ConfigError("unknown model kind \"" + std::string(s) + "\" (expected dnn or lstm)");
    }

    // Inference cost of one prediction. A multiply-add counts as 2 FLOPs.
    //   dnn:  2 P D + D + 2 D T + T
    //   lstm: P (4 (2 D + 2 D^2 + D) + 9 D) + 2 D T + T
    // where P is the input length, D the hidden size and T the output length.
    inline std::uint64_t count_flops(ModelKind kind, std::uint64_t p, std::uint64_t d, std::uint64_t t)
    {
        if (p == 0 || d == 0 || t == 0)
            throw std::invalid_argument("count_flops: dimensions must be positive");
        const std::uint64_t head = 2 * d * t + t;
        if (kind == ModelKind::dnn)
            return 2 * p * d + d + head;
        return p * (4 * (2 * d + 2 * d * d + d) + 9 * d) + head;
    }
} // namespace csipred::nn

#endif // CSIPRED_NN_FLOPS_HPP
