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


#include "csipred/nn/lstm.hpp"

#include <catch_amalgamated.hpp>

using namespace csipred;
using namespace csipred::nn;
using Catch::Matchers::WithinAbs;

namespace
{
    double sig(double z) { return 1.0 / (1.0 + std::exp(-z)); }

    // Scalar-by-scalar cell evaluation straight from the flat layout
    // [Wx 4xD | Wh 4xDxD | b 4xD | ...], gate order i, f, o, g.
    void oracle_step(const LstmParams &p, double x, const std::vector<double> &h_prev, const std::vector<double> &c_prev, std::vector<double> &h, std::vector<double> &c)
    {
        const std::size_t D = p.hidden;
        const double *wx = p.data.data();
        const double *wh = wx + 4 * D;
        const double *b = wh + 4 * D * D;
        auto pre = [&](std::size_t g, std::size_t d) {
            double z = b[g * D + d] + wx[g * D + d] * x;
            for (std::size_t j = 0; j < D; ++j)
                z += wh[(g * D + d) * D + j] * h_prev[j];
            return z;
        };
        h.assign(D, 0.0);
        c.assign(D, 0.0);
        for (std::size_t d = 0; d < D; ++d)
        {
            const double i = sig(pre(0, d));
            const double f = sig(pre(1, d));
            const double o = sig(pre(2, d));
            const double g = std::tanh(pre(3, d));
            c[d] = f * c_prev[d] + i * g;
            h[d] = o * std::tanh(c[d]);
        }
    }

    LstmParams random_lstm(std::size_t D, std::size_t T, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, 0.8);
        LstmParams p(D, T);
        for (auto &v : p.data)
            v = n(rng);
        return p;
    }
} // namespace

TEST_CASE("zero LSTM keeps zero state", "[lstm]")
{
    LstmParams p(3, 2);
    const std::vector<double> z(3, 0.0);
    const auto [h, c] = lstm_step(p, 4.2, z, z);
    for (std::size_t d = 0; d < 3; ++d)
    {
        CHECK(h[d] == 0.0);
        CHECK(c[d] == 0.0);
    }
    const std::vector<double> x{1.0, -2.0, 3.0};
    const auto y = lstm_forward(p, x);
    CHECK(y == std::vector<double>{0.0, 0.0});
}

TEST_CASE("saturated forget gate carries memory", "[lstm]")
{
    LstmParams p(3, 1);
    for (std::size_t d = 0; d < 3; ++d)
    {
        p.b(gate_forget, d) = 50.0;
        p.b(gate_input, d) = -50.0;
        p.b(gate_output, d) = -50.0;
    }
    const std::vector<double> h0(3, 0.0);
    const std::vector<double> c0{0.3, -0.7, 1.9};
    const auto [h, c] = lstm_step(p, 2.0, h0, c0);
    for (std::size_t d = 0; d < 3; ++d)
    {
        CHECK_THAT(c[d], WithinAbs(c0[d], 1e-12));
        CHECK_THAT(h[d], WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("LSTM step matches the scalar oracle", "[lstm]")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        const auto p = random_lstm(3, 2, seed);
        std::mt19937_64 rng(seed + 100);
        std::normal_distribution<double> n(0.0, 1.0);
        std::vector<double> h0(3), c0(3);
        for (auto &v : h0)
            v = std::tanh(n(rng));
        for (auto &v : c0)
            v = n(rng);
        const double x = n(rng);
        std::vector<double> hr, cr;
        oracle_step(p, x, h0, c0, hr, cr);
        const auto [h, c] = lstm_step(p, x, h0, c0);
        for (std::size_t d = 0; d < 3; ++d)
        {
            CHECK_THAT(h[d], WithinAbs(hr[d], 1e-12));
            CHECK_THAT(c[d], WithinAbs(cr[d], 1e-12));
        }
    }
}

TEST_CASE("LSTM forward matches the hand-unrolled recursion", "[lstm]")
{
    const std::size_t D = 3, T = 2;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        const auto p = random_lstm(D, T, seed * 7);
        const std::vector<double> x{0.5, -1.0, 0.25, 2.0}; // oldest first
        std::vector<double> h(D, 0.0), c(D, 0.0), hn, cn;
        for (double xt : x)
        {
            oracle_step(p, xt, h, c, hn, cn);
            h = hn;
            c = cn;
        }
        const double *head_w = p.data.data() + 4 * D + 4 * D * D + 4 * D;
        const double *head_b = head_w + T * D;
        const auto y = lstm_forward(p, x);
        for (std::size_t k = 0; k < T; ++k)
        {
            double z = head_b[k];
            for (std::size_t d = 0; d < D; ++d)
                z += head_w[k * D + d] * h[d];
            CHECK_THAT(y[k], WithinAbs(z, 1e-12));
        }
        // Order matters: the reversed sequence gives a different answer.
        const std::vector<double> rev(x.rbegin(), x.rend());
        CHECK(lstm_forward(p, rev) != y);
    }
}

TEST_CASE("single-element sequence is one step plus the head", "[lstm]")
{
    const auto p = random_lstm(2, 3, 42);
    const std::vector<double> z(2, 0.0);
    const auto [h, c] = lstm_step(p, 0.7, z, z);
    std::vector<double> expect(3);
    lstm_head_into(p, h, expect);
    const std::vector<double> x{0.7};
    const auto y = lstm_forward(p, x);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(y[k] == expect[k]);
}

TEST_CASE("LSTM hidden state stays bounded", "[lstm]")
{
    auto p = random_lstm(4, 1, 8);
    for (auto &v : p.data)
        v *= 10.0; // push gates into saturation
    std::vector<double> h(4, 0.0), c(4, 0.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 30.0);
    for (int t = 0; t < 2000; ++t)
    {
        auto [hn, cn] = lstm_step(p, n(rng), h, c);
        for (std::size_t d = 0; d < 4; ++d)
        {
            CHECK(std::isfinite(cn[d]));
            CHECK(std::abs(hn[d]) < 1.0);
            CHECK(std::abs(std::tanh(cn[d])) <= 1.0);
        }
        h = hn;
        c = cn;
    }
}

TEST_CASE("LSTM initialization and dimension checks", "[lstm]")
{
    std::mt19937_64 rng(2);
    const auto p = init_lstm(4, 3, rng);
    const double a = 1.0 / std::sqrt(5.0);
    for (std::size_t g = 0; g < n_gates; ++g)
        for (std::size_t d = 0; d < 4; ++d)
        {
            CHECK(std::abs(p.wx(g, d)) <= a);
            CHECK(p.b(g, d) == (g == gate_forget ? 1.0 : 0.0));
            for (std::size_t j = 0; j < 4; ++j)
                CHECK(std::abs(p.wh(g, d, j)) <= a);
        }
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(p.head_b(k) == 0.0);

    const std::vector<double> wrong(2, 0.0), ok(4, 0.0);
    CHECK_THROWS_AS(lstm_step(p, 1.0, wrong, ok), DimensionError);
    const std::vector<double> empty;
    CHECK_THROWS_AS(lstm_forward(p, empty), DimensionError);
}
