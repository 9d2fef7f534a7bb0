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

#ifndef CSIPRED_PREDICTOR_WINDOW_SAMPLE_HPP
#define CSIPRED_PREDICTOR_WINDOW_SAMPLE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace csipred
{
    // One training/evaluation pair anchored at reporting slot n.
    //   x = [g(n), g(n - T), ..., g(n - P T)]   (newest first, P + 1 entries)
    //   y = [g(n + 1), ..., g(n + T - 1)]        (T - 1 entries)
    // Values are effective SINRs in dB.
    struct WindowSample
    {
        std::vector<double> x;
        std::vector<double> y;
        std::size_t anchor_slot = 0;
    };

    struct DatasetProvenance
    {
        std::string profile;
        double doppler_hz = 0.0;
        std::vector<std::uint64_t> train_seeds;
        std::vector<std::uint64_t> val_seeds;
        std::vector<std::uint64_t> test_seeds;
        std::uint64_t config_hash = 0;
    };

    struct DatasetSplit
    {
        std::vector<WindowSample> train;
        std::vector<WindowSample> val;
        std::vector<WindowSample> test;
        DatasetProvenance provenance;
    };
} // namespace csipred

#endif // CSIPRED_PREDICTOR_WINDOW_SAMPLE_HPP
