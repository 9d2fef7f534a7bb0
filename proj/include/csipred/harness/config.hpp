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

#ifndef CSIPRED_HARNESS_CONFIG_HPP
#define CSIPRED_HARNESS_CONFIG_HPP

#include "csipred/channel/tdl_profile.hpp"
#include "csipred/common.hpp"
#include "csipred/link/cqi_table.hpp"
#include "csipred/nn/flops.hpp"
#include "csipred/nn/train.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace csipred
{
    enum class Policy
    {
        stale,
        dnn,
        lstm,
        oracle
    };

    inline std::string to_string(Policy p)
    {
        switch (p)
        {
        case Policy::stale:
            return "stale";
        case Policy::dnn:
            return "dnn";
        case Policy::lstm:
            return "lstm";
        case Policy::oracle:
            return "oracle";
        }
        return "?";
    }

    inline Policy parse_policy(std::string_view s)
    {
        if (s == "stale")
            return Policy::stale;
        if (s == "dnn")
            return Policy::dnn;
        if (s == "lstm")
            return Policy::lstm;
        if (s == "oracle")
            return Policy::oracle;
        throw ConfigError("unknown policy \"" + std::string(s) + "\" (expected stale, dnn, lstm or oracle)");
    }

    // Every experiment knob. Defaults reproduce the reference link setup
    // (12.5 dB SNR, 52 RBs at 15 kHz, 4x4 MIMO with 4 layers, 300 ns delay
    // spread, 4-slot reporting period, 1 ms slots) at one tenth of the full
    // dataset size.
    struct ExperimentConfig
    {
        // link
        double snr_db = 12.5;
        std::size_t n_rb = 52;
        double scs_hz = 15e3;
        double bandwidth_mhz = 10.0;
        double delay_spread_ns = 300.0;
        std::size_t n_tx = 4;
        std::size_t n_rx = 4;
        std::size_t n_layers = 4;
        std::size_t t_csi = 4;
        double slot_ms = 1.0;
        std::string cqi_table_path; // empty: built-in table

        // conditions
        std::vector<TdlModel> profiles{TdlModel::A, TdlModel::D};
        std::vector<double> doppler_list_hz{1, 5, 10, 15, 20, 25, 30};
        TdlModel profile = TdlModel::A; // single-condition commands
        double doppler_hz = 10.0;       // single-condition commands
        bool allow_any_doppler = false; // lift the [1, 30] Hz range check

        // dataset
        std::size_t history_p = 8;
        std::size_t train_size = 40000;
        std::size_t val_size = 10000;
        std::size_t test_size = 2000;
        std::size_t slots_per_realization = 2048;
        std::uint64_t seed = 1;

        // models and training
        std::vector<nn::ModelKind> model_kinds{nn::ModelKind::dnn, nn::ModelKind::lstm};
        nn::ModelKind model_kind = nn::ModelKind::lstm;
        std::size_t hidden_d = 16;
        std::vector<std::size_t> d_list{2, 4, 8, 16, 32};
        std::size_t epochs = 200;
        std::size_t batch_size = 256;
        double learning_rate = 1e-3;
        double adam_beta1 = 0.9;
        double adam_beta2 = 0.999;
        double adam_eps = 1e-8;
        std::uint64_t train_seed = 1;
        std::size_t n_train_seeds = 1;

        // throughput
        Policy policy = Policy::stale;
        std::size_t throughput_slots = 200000;
        std::string model_path; // empty: train per condition

        std::size_t jobs = 1;

        double snr_linear() const { return db_to_linear(snr_db); }
        double slot_s() const { return slot_ms * 1e-3; }

        nn::TrainConfig train_config(std::uint64_t seed_offset = 0) const
        {
            nn::TrainConfig t;
            t.epochs = epochs;
            t.batch_size = batch_size;
            t.learning_rate = learning_rate;
            t.seed = train_seed + seed_offset;
            t.adam_beta1 = adam_beta1;
            t.adam_beta2 = adam_beta2;
            t.adam_eps = adam_eps;
            return t;
        }

        CqiTable cqi_table() const { return cqi_table_path.empty() ? default_cqi_table() : load_cqi_table(cqi_table_path); }

        void validate() const
        {
            auto check_doppler = [&](double f) {
                if (!(f >= 0.0) || !std::isfinite(f))
                    throw ConfigError("Doppler values must be >= 0");
                if (!allow_any_doppler && (f < 1.0 || f > 30.0))
                    throw ConfigError("Doppler " + std::to_string(f) + " Hz outside [1, 30]; set allow_any_doppler = true to override");
            };
            for (double f : doppler_list_hz)
                check_doppler(f);
            check_doppler(doppler_hz);
            if (profiles.empty() || doppler_list_hz.empty() || model_kinds.empty() || d_list.empty())
                throw ConfigError("profile, Doppler, model and D lists must be non-empty");
            if (n_rb < 1 || n_tx < 1 || n_rx < 1)
                throw ConfigError("n_rb, n_tx and n_rx must be >= 1");
            if (n_layers < 1 || n_layers > std::min(n_tx, n_rx))
                throw ConfigError("n_layers must lie in [1, min(n_tx, n_rx)]");
            if (t_csi < 2)
                throw ConfigError("t_csi must be >= 2 (t_csi = 1 leaves nothing to predict)");
            if (train_size < 1 || val_size < 1 || test_size < 1)
                throw ConfigError("dataset sizes must be > 0");
            if (hidden_d < 1 || jobs < 1 || n_train_seeds < 1)
                throw ConfigError("hidden_d, jobs and n_train_seeds must be >= 1");
            for (auto d : d_list)
                if (d < 1)
                    throw ConfigError("d_list entries must be >= 1");
            if (!(slot_ms > 0.0) || !(scs_hz > 0.0) || !(delay_spread_ns > 0.0))
                throw ConfigError("slot_ms, scs_hz and delay_spread_ns must be positive");
            if (throughput_slots < 1)
                throw ConfigError("throughput_slots must be >= 1");
            train_config().validate();
        }
    };

    namespace detail
    {
        inline std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return std::string(s.substr(b, e - b + 1));
        }

        inline std::vector<std::string> split_list(std::string_view s)
        {
            std::vector<std::string> out;
            std::string cur;
            for (char c : s)
            {
                if (c == ',')
                {
                    out.push_back(trim(cur));
                    cur.clear();
                }
                else
                    cur.push_back(c);
            }
            out.push_back(trim(cur));
            std::erase_if(out, [](const std::string &x) { return x.empty(); });
            return out;
        }

        inline double to_double(const std::string &key, const std::string &v)
        {
            double out = 0.0;
            const auto *end = v.data() + v.size();
            auto [ptr, ec] = std::from_chars(v.data(), end, out);
            if (ec != std::errc() || ptr != end)
                throw ConfigError("key \"" + key + "\": \"" + v + "\" is not a number");
            return out;
        }

        inline std::uint64_t to_uint(const std::string &key, const std::string &v)
        {
            std::uint64_t out = 0;
            const auto *end = v.data() + v.size();
            auto [ptr, ec] = std::from_chars(v.data(), end, out);
            if (ec != std::errc() || ptr != end)
                throw ConfigError("key \"" + key + "\": \"" + v + "\" is not a non-negative integer");
            return out;
        }

        inline bool to_bool(const std::string &key, const std::string &v)
        {
            if (v == "true" || v == "1" || v == "yes")
                return true;
            if (v == "false" || v == "0" || v == "no")
                return false;
            throw ConfigError("key \"" + key + "\": \"" + v + "\" is not a boolean");
        }

        inline std::string fmt_double(double v)
        {
            std::ostringstream os;
            os.precision(17);
            os << v;
            return os.str();
        }

        template <typename T, typename F>
        std::string join(const std::vector<T> &xs, F f)
        {
            std::string s;
            for (std::size_t i = 0; i < xs.size(); ++i)
            {
                if (i)
                    s += ',';
                s += f(xs[i]);
            }
            return s;
        }

        struct KeyHandler
        {
            std::function<void(ExperimentConfig &, const std::string &)> set;
            std::function<std::string(const ExperimentConfig &)> get;
        };

        // clang-format off
        inline const std::map<std::string, KeyHandler> &config_keys()
        {
            using C = ExperimentConfig;
            static const std::map<std::string, KeyHandler> keys = [] {
                std::map<std::string, KeyHandler> k;
                auto dbl = [&k](const char *name, double C::*m) {
                    k[name] = {[m, name](C &c, const std::string &v) { c.*m = to_double(name, v); },
                               [m](const C &c) { return fmt_double(c.*m); }};
                };
                auto uns = [&k](const char *name, std::size_t C::*m) {
                    k[name] = {[m, name](C &c, const std::string &v) { c.*m = static_cast<std::size_t>(to_uint(name, v)); },
                               [m](const C &c) { return std::to_string(c.*m); }};
                };
                auto u64 = [&k](const char *name, std::uint64_t C::*m) {
                    k[name] = {[m, name](C &c, const std::string &v) { c.*m = to_uint(name, v); },
                               [m](const C &c) { return std::to_string(c.*m); }};
                };
                auto str = [&k](const char *name, std::string C::*m) {
                    k[name] = {[m](C &c, const std::string &v) { c.*m = v; },
                               [m](const C &c) { return c.*m; }};
                };
                dbl("snr_db", &C::snr_db);
                uns("n_rb", &C::n_rb);
                dbl("scs_hz", &C::scs_hz);
                dbl("bandwidth_mhz", &C::bandwidth_mhz);
                dbl("delay_spread_ns", &C::delay_spread_ns);
                uns("n_tx", &C::n_tx);
                uns("n_rx", &C::n_rx);
                uns("n_layers", &C::n_layers);
                uns("t_csi", &C::t_csi);
                dbl("slot_ms", &C::slot_ms);
                str("cqi_table", &C::cqi_table_path);
                dbl("doppler_hz", &C::doppler_hz);
                uns("history_p", &C::history_p);
                uns("train_size", &C::train_size);
                uns("val_size", &C::val_size);
                uns("test_size", &C::test_size);
                uns("slots_per_realization", &C::slots_per_realization);
                u64("seed", &C::seed);
                uns("hidden_d", &C::hidden_d);
                uns("epochs", &C::epochs);
                uns("batch_size", &C::batch_size);
                dbl("learning_rate", &C::learning_rate);
                dbl("adam_beta1", &C::adam_beta1);
                dbl("adam_beta2", &C::adam_beta2);
                dbl("adam_eps", &C::adam_eps);
                u64("train_seed", &C::train_seed);
                uns("n_train_seeds", &C::n_train_seeds);
                uns("throughput_slots", &C::throughput_slots);
                str("model_path", &C::model_path);
                uns("jobs", &C::jobs);

                k["allow_any_doppler"] = {[](C &c, const std::string &v) { c.allow_any_doppler = to_bool("allow_any_doppler", v); },
                                          [](const C &c) { return std::string(c.allow_any_doppler ? "true" : "false"); }};
                k["profiles"] = {[](C &c, const std::string &v) {
                                     c.profiles.clear();
                                     for (const auto &s : split_list(v)) c.profiles.push_back(parse_tdl_model(s));
                                 },
                                 [](const C &c) { return join(c.profiles, [](TdlModel m) { return to_string(m); }); }};
                k["profile"] = {[](C &c, const std::string &v) { c.profile = parse_tdl_model(v); },
                                [](const C &c) { return to_string(c.profile); }};
                k["doppler_list_hz"] = {[](C &c, const std::string &v) {
                                            c.doppler_list_hz.clear();
                                            for (const auto &s : split_list(v)) c.doppler_list_hz.push_back(to_double("doppler_list_hz", s));
                                        },
                                        [](const C &c) { return join(c.doppler_list_hz, fmt_double); }};
                k["model_kinds"] = {[](C &c, const std::string &v) {
                                        c.model_kinds.clear();
                                        for (const auto &s : split_list(v)) c.model_kinds.push_back(nn::parse_model_kind(s));
                                    },
                                    [](const C &c) { return join(c.model_kinds, [](nn::ModelKind m) { return nn::to_string(m); }); }};
                k["model_kind"] = {[](C &c, const std::string &v) { c.model_kind = nn::parse_model_kind(v); },
                                   [](const C &c) { return nn::to_string(c.model_kind); }};
                k["d_list"] = {[](C &c, const std::string &v) {
                                   c.d_list.clear();
                                   for (const auto &s : split_list(v)) c.d_list.push_back(static_cast<std::size_t>(to_uint("d_list", s)));
                               },
                               [](const C &c) { return join(c.d_list, [](std::size_t d) { return std::to_string(d); }); }};
                k["policy"] = {[](C &c, const std::string &v) { c.policy = parse_policy(v); },
                               [](const C &c) { return to_string(c.policy); }};
                return k;
            }();
            return keys;
        }
        // clang-format on
    } // namespace detail

    inline void apply_setting(ExperimentConfig &cfg, const std::string &key, const std::string &value)
    {
        const auto &keys = detail::config_keys();
        const auto it = keys.find(detail::trim(key));
        if (it == keys.end())
            throw ConfigError("unknown configuration key \"" + detail::trim(key) + "\"");
        it->second.set(cfg, detail::trim(value));
    }

    // "key=value" as given on the command line.
    inline void apply_override(ExperimentConfig &cfg, const std::string &kv)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override \"" + kv + "\" is not of the form key=value");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }

    // One "key = value" per line, '#' comments, blank lines ignored.
    inline ExperimentConfig parse_config(std::istream &is, ExperimentConfig cfg = {})
    {
        std::string line;
        int lineno = 0;
        while (std::getline(is, line))
        {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (detail::trim(line).empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
            try
            {
                apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
            }
            catch (const ConfigError &e)
            {
                throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        return cfg;
    }

    inline ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream is(path);
        if (!is)
            throw ConfigError("cannot open config file " + path);
        return parse_config(is);
    }

    // Canonical "key = value" dump, keys sorted; parse_config(dump) round-trips.
    inline std::string dump_config(const ExperimentConfig &cfg)
    {
        std::string s;
        for (const auto &[key, h] : detail::config_keys())
            s += key + " = " + h.get(cfg) + "\n";
        return s;
    }

    inline std::uint64_t config_hash(const ExperimentConfig &cfg)
    {
        Fnv1a h;
        h.update(dump_config(cfg));
        return h.digest();
    }
} // namespace csipred

#endif // CSIPRED_HARNESS_CONFIG_HPP
