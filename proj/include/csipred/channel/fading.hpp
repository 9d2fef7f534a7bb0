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

#ifndef CSIPRED_CHANNEL_FADING_HPP
#define CSIPRED_CHANNEL_FADING_HPP

#include "csipred/channel/tdl_profile.hpp"
#include "csipred/common.hpp"

#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace csipred
{
    using cplx = std::complex<double>;

    struct FadingConfig
    {
        double doppler_hz = 10.0;
        std::size_t n_slots = 1;
        double slot_duration_s = 1e-3;
        std::size_t n_tx = 4;
        std::size_t n_rx = 4;
        std::uint64_t seed = 1;
        std::size_t n_rb = 52;
        double scs_hz = 15e3;

        void validate() const
        {
            if (!(doppler_hz >= 0.0) || !std::isfinite(doppler_hz))
                throw ConfigError("doppler_hz must be >= 0");
            if (n_slots < 1)
                throw ConfigError("n_slots must be >= 1");
            if (n_tx < 1 || n_rx < 1)
                throw ConfigError("n_tx and n_rx must be >= 1");
            if (n_rb < 1)
                throw ConfigError("n_rb must be >= 1");
            if (!(slot_duration_s > 0.0) || !(scs_hz > 0.0))
                throw ConfigError("slot duration and subcarrier spacing must be positive");
        }
    };

    // LOS arrival angle relative to the direction of motion.
    inline constexpr double los_arrival_angle = std::numbers::pi / 4.0;

    // Sinusoids per fading process (sum-of-sinusoids Clarke model).
    inline constexpr std::size_t sinusoids_per_tap = 32;

    // Streaming TDL MIMO fading generator.
    //
    // Each (tap, rx, tx) triple is an independent sum of equal-power complex
    // sinusoids, one per angle step on the circle, each jittered by its own
    // random fraction of a step, with uniform phases. Jitter lies in [1/8, 3/8]
    // so no two sinusoids of a process share a Doppler frequency; drawing it
    // per sinusoid (not per process) keeps different taps from sharing whole
    // frequency sets, which would stop cross-tap terms from averaging out. Phasors advance by complex rotation and are re-anchored to the
    // exact phase every `reanchor_period` slots, so slot q depends on q only.
    class FadingChannel
    {
      public:
        static constexpr std::size_t reanchor_period = 1024;

        FadingChannel(const TapProfile &profile, const FadingConfig &cfg) : profile_(profile), cfg_(cfg)
        {
            cfg_.validate();
            if (profile_.taps.empty())
                throw ConfigError("tap profile has no taps");

            const std::size_t n_taps = profile_.taps.size();
            const std::size_t n_proc = n_taps * cfg_.n_rx * cfg_.n_tx;
            const std::size_t ns = sinusoids_per_tap;

            std::mt19937_64 rng(cfg_.seed);
            std::uniform_real_distribution<double> offset_dist(0.125, 0.375);
            std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);

            freq_hz_.resize(n_proc * ns);
            phase0_.resize(n_proc * ns);
            step_.resize(n_proc * ns);
            phasor_.resize(n_proc * ns);
            for (std::size_t p = 0; p < n_proc; ++p)
            {
                for (std::size_t k = 0; k < ns; ++k)
                {
                    const double offset = offset_dist(rng);
                    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + offset) / static_cast<double>(ns);
                    freq_hz_[p * ns + k] = cfg_.doppler_hz * std::cos(angle);
                    phase0_[p * ns + k] = phase_dist(rng);
                }
            }

            const std::size_t n_pairs = cfg_.n_rx * cfg_.n_tx;
            los_phase0_.resize(n_pairs);
            for (auto &ph : los_phase0_)
                ph = phase_dist(rng);
            los_freq_hz_ = cfg_.doppler_hz * std::cos(los_arrival_angle);

            for (std::size_t i = 0; i < step_.size(); ++i)
                step_[i] = std::polar(1.0, 2.0 * std::numbers::pi * freq_hz_[i] * cfg_.slot_duration_s);
            los_step_ = std::polar(1.0, 2.0 * std::numbers::pi * los_freq_hz_ * cfg_.slot_duration_s);

            amplitude_.resize(n_taps);
            for (std::size_t l = 0; l < n_taps; ++l)
                amplitude_[l] = std::sqrt(profile_.power_linear(l));
            if (profile_.taps.front().is_los)
            {
                const double k = db_to_linear(profile_.k_factor_db);
                los_specular_ = std::sqrt(k / (k + 1.0));
                los_diffuse_ = std::sqrt(1.0 / (k + 1.0));
            }

            // Per-RB phase factors exp(-j 2 pi f tau), f at the RB's centre subcarrier.
            rb_phase_.resize(cfg_.n_rb * n_taps);
            for (std::size_t n = 0; n < cfg_.n_rb; ++n)
            {
                const double f = (12.0 * static_cast<double>(n) + 6.0) * cfg_.scs_hz;
                for (std::size_t l = 0; l < n_taps; ++l)
                    rb_phase_[n * n_taps + l] = std::polar(1.0, -2.0 * std::numbers::pi * f * profile_.delay_s(l));
            }

            los_phasor_.resize(n_pairs);
            gains_.resize(n_proc);
            seek(0);
        }

        const FadingConfig &config() const { return cfg_; }
        const TapProfile &profile() const { return profile_; }
        std::size_t slot() const { return slot_; }
        std::size_t n_taps() const { return profile_.taps.size(); }

        // Moves to slot `q`. Cheap when q == slot() + 1.
        void seek(std::size_t q)
        {
            if (q == slot_ + 1 && q % reanchor_period != 0)
            {
                for (std::size_t i = 0; i < phasor_.size(); ++i)
                    phasor_[i] *= step_[i];
                for (auto &ph : los_phasor_)
                    ph *= los_step_;
            }
            else
            {
                const double t = static_cast<double>(q) * cfg_.slot_duration_s;
                for (std::size_t i = 0; i < phasor_.size(); ++i)
                    phasor_[i] = std::polar(1.0, cycles_to_rad(freq_hz_[i] * t) + phase0_[i]);
                for (std::size_t i = 0; i < los_phasor_.size(); ++i)
                    los_phasor_[i] = std::polar(1.0, cycles_to_rad(los_freq_hz_ * t) + los_phase0_[i]);
            }
            slot_ = q;
            update_gains();
        }

        void advance() { seek(slot_ + 1); }

        // Complex gain alpha_l(t) of tap l between tx and rx at the current slot.
        cplx tap_gain(std::size_t l, std::size_t rx, std::size_t tx) const { return gains_[(l * cfg_.n_rx + rx) * cfg_.n_tx + tx]; }

        // Unit-power gain of tap l without the profile amplitude.
        cplx normalized_tap_gain(std::size_t l, std::size_t rx, std::size_t tx) const { return tap_gain(l, rx, tx) / amplitude_[l]; }

        // Writes the per-RB frequency response in [rb][rx][tx] order.
        void frequency_response(std::span<cplx> out) const
        {
            const std::size_t n_taps = profile_.taps.size();
            const std::size_t n_pairs = cfg_.n_rx * cfg_.n_tx;
            if (out.size() != cfg_.n_rb * n_pairs)
                throw DimensionError("frequency_response: output span has wrong size");
            for (std::size_t n = 0; n < cfg_.n_rb; ++n)
            {
                const cplx *ph = &rb_phase_[n * n_taps];
                cplx *o = &out[n * n_pairs];
                for (std::size_t i = 0; i < n_pairs; ++i)
                    o[i] = 0.0;
                for (std::size_t l = 0; l < n_taps; ++l)
                {
                    const cplx *g = &gains_[l * n_pairs];
                    for (std::size_t i = 0; i < n_pairs; ++i)
                        o[i] += g[i] * ph[l];
                }
            }
        }

      private:
        static double cycles_to_rad(double cycles)
        {
            return 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
        }

        void update_gains()
        {
            const std::size_t ns = sinusoids_per_tap;
            const double norm = 1.0 / std::sqrt(static_cast<double>(ns));
            const std::size_t n_pairs = cfg_.n_rx * cfg_.n_tx;
            for (std::size_t p = 0; p < gains_.size(); ++p)
            {
                cplx acc = 0.0;
                const cplx *ph = &phasor_[p * ns];
                for (std::size_t k = 0; k < ns; ++k)
                    acc += ph[k];
                const std::size_t l = p / n_pairs;
                cplx g = acc * norm;
                if (l == 0 && profile_.taps.front().is_los)
                    g = los_specular_ * los_phasor_[p % n_pairs] + los_diffuse_ * g;
                gains_[p] = amplitude_[l] * g;
            }
        }

        TapProfile profile_;
        FadingConfig cfg_;
        std::size_t slot_ = static_cast<std::size_t>(-1);

        std::vector<double> freq_hz_;
        std::vector<double> phase0_;
        std::vector<cplx> step_;
        std::vector<cplx> phasor_;

        std::vector<double> los_phase0_;
        std::vector<cplx> los_phasor_;
        double los_freq_hz_ = 0.0;
        cplx los_step_{1.0, 0.0};
        double los_specular_ = 0.0;
        double los_diffuse_ = 1.0;

        std::vector<double> amplitude_;
        std::vector<cplx> rb_phase_;
        std::vector<cplx> gains_;
    };

    // Frequency-domain channel of one realization, h[slot][rb][rx][tx].
    struct ChannelSlotSeries
    {
        std::size_t n_slots = 0;
        std::size_t n_rb = 0;
        std::size_t n_rx = 0;
        std::size_t n_tx = 0;
        double scs_hz = 15e3;
        std::vector<cplx> h;

        std::size_t index(std::size_t q, std::size_t n, std::size_t r, std::size_t t) const { return ((q * n_rb + n) * n_rx + r) * n_tx + t; }
        const cplx &at(std::size_t q, std::size_t n, std::size_t r, std::size_t t) const { return h[index(q, n, r, t)]; }
        std::span<const cplx> slot(std::size_t q) const { return {h.data() + q * n_rb * n_rx * n_tx, n_rb * n_rx * n_tx}; }
        std::span<const cplx> rb(std::size_t q, std::size_t n) const { return {h.data() + index(q, n, 0, 0), n_rx * n_tx}; }
    };

    inline ChannelSlotSeries generate_fading(const TapProfile &profile, const FadingConfig &cfg)
    {
        FadingChannel ch(profile, cfg);
        ChannelSlotSeries s;
        s.n_slots = cfg.n_slots;
        s.n_rb = cfg.n_rb;
        s.n_rx = cfg.n_rx;
        s.n_tx = cfg.n_tx;
        s.scs_hz = cfg.scs_hz;
        const std::size_t per_slot = cfg.n_rb * cfg.n_rx * cfg.n_tx;
        s.h.resize(cfg.n_slots * per_slot);
        for (std::size_t q = 0; q < cfg.n_slots; ++q)
        {
            if (q > 0)
                ch.advance();
            ch.frequency_response(std::span<cplx>(s.h.data() + q * per_slot, per_slot));
        }
        return s;
    }

    // Slot whose channel the transmitter still holds at slot q when CSI is refreshed
    // every t_csi slots.
    inline std::size_t stale_channel_slot(std::size_t q, std::size_t t_csi)
    {
        if (t_csi < 1)
            throw ConfigError("t_csi must be >= 1");
        return (q / t_csi) * t_csi;
    }

    // CHSS binary export: "CHSS", u32 version, u32 n_slots, n_rb, n_rx, n_tx, then
    // (re, im) f64 pairs in [slot][rb][rx][tx] order, all little-endian.
    inline constexpr std::uint32_t chss_version = 1;

    inline void write_channel_series(std::ostream &os, const ChannelSlotSeries &s)
    {
        binio::write_magic(os, "CHSS");
        binio::write<std::uint32_t>(os, chss_version);
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_slots));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_rb));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_rx));
        binio::write<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_tx));
        for (const auto &v : s.h)
        {
            binio::write<double>(os, v.real());
            binio::write<double>(os, v.imag());
        }
    }

    inline ChannelSlotSeries read_channel_series(std::istream &is)
    {
        binio::expect_magic(is, "CHSS");
        const auto version = binio::read<std::uint32_t>(is);
        if (version != chss_version)
            throw FormatError("unsupported CHSS version " + std::to_string(version));
        ChannelSlotSeries s;
        s.n_slots = binio::read<std::uint32_t>(is);
        s.n_rb = binio::read<std::uint32_t>(is);
        s.n_rx = binio::read<std::uint32_t>(is);
        s.n_tx = binio::read<std::uint32_t>(is);
        s.h.resize(s.n_slots * s.n_rb * s.n_rx * s.n_tx);
        for (auto &v : s.h)
        {
            const double re = binio::read<double>(is);
            const double im = binio::read<double>(is);
            v = {re, im};
        }
        return s;
    }

    inline void save_channel_series(const std::string &path, const ChannelSlotSeries &s)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + path + " for writing");
        write_channel_series(os, s);
        if (!os)
            throw std::runtime_error("write failed: " + path);
    }
} // namespace csipred

#endif // CSIPRED_CHANNEL_FADING_HPP
