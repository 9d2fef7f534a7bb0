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

#ifndef CSIPRED_HARNESS_PARALLEL_HPP
#define CSIPRED_HARNESS_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace csipred
{
    // Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must write to
    // disjoint outputs; the first exception is rethrown after all threads join.
    template <typename F>
    void parallel_for(std::size_t n, std::size_t jobs, F &&fn)
    {
        if (jobs <= 1 || n <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < std::min(jobs, n); ++t)
            threads.emplace_back(worker);
        for (auto &t : threads)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }
} // namespace csipred

#endif // CSIPRED_HARNESS_PARALLEL_HPP
