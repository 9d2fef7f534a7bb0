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


#include "csipred/nn/dense.hpp"

#include <catch_amalgamated.hpp>

using namespace csipred;
using namespace csipred::nn;
using Catch::Matchers::WithinAbs;

TEST_CASE("zero dense network outputs zeros", "[dense]")
{
    DenseParams p(5, 3, 2);
    const std::vector<double> x{1, -2, 3, -4, 5};
    const auto y = dense_forward(p, x);
    REQUIRE(y.size() == 2);
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 0.0);
}

TEST_CASE("ReLU clips negative hidden units", "[dense]")
{
    DenseParams p(2, 2, 2);
    p.w1(0, 0) = p.w1(1, 1) = 1.0;
    p.w2(0, 0) = p.w2(1, 1) = 1.0;
    const std::vector<double> x{-1.0, 2.0};
    const auto y = dense_forward(p, x);
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 2.0);
}

TEST_CASE("dense forward matches plain matrix arithmetic", "[dense]")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::size_t P = 3, D = 4, T = 2;
        DenseParams p(P, D, T);
        for (auto &v : p.data)
            v = n(rng);
        std::vector<double> x(P);
        for (auto &v : x)
            v = n(rng);

        // Oracle from raw flat offsets: W1 row-major D x P, b1, W2 row-major T x D, b2.
        const double *w1 = p.data.data();
        const double *b1 = w1 + D * P;
        const double *w2 = b1 + D;
        const double *b2 = w2 + T * D;
        std::vector<double> h(D);
        for (std::size_t j = 0; j < D; ++j)
        {
            double z = b1[j];
            for (std::size_t i = 0; i < P; ++i)
                z += w1[j * P + i] * x[i];
            h[j] = std::max(0.0, z);
        }
        const auto y = dense_forward(p, x);
        for (std::size_t k = 0; k < T; ++k)
        {
            double z = b2[k];
            for (std::size_t j = 0; j < D; ++j)
                z += w2[k * D + j] * h[j];
            CHECK_THAT(y[k], WithinAbs(z, 1e-12));
        }
    }
}

TEST_CASE("dense dimension mismatch is an error", "[dense]")
{
    DenseParams p(3, 2, 1);
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_AS(dense_forward(p, x), DimensionError);
    p.data.pop_back();
    const std::vector<double> x3{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(dense_forward(p, x3), DimensionError);
}

TEST_CASE("dense initialization bounds and zero biases", "[dense]")
{
    std::mt19937_64 rng(1);
    const auto p = init_dense(9, 16, 3, rng);
    const double a1 = 1.0 / 3.0, a2 = 1.0 / 4.0;
    for (std::size_t j = 0; j < 16; ++j)
    {
        CHECK(p.b1(j) == 0.0);
        for (std::size_t i = 0; i < 9; ++i)
            CHECK(std::abs(p.w1(j, i)) <= a1);
    }
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(p.b2(k) == 0.0);
        for (std::size_t j = 0; j < 16; ++j)
            CHECK(std::abs(p.w2(k, j)) <= a2);
    }
    std::mt19937_64 rng2(1);
    CHECK(init_dense(9, 16, 3, rng2).data == p.data);
}
