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

#ifndef CSIPRED_CLI_CLI_HPP
#define CSIPRED_CLI_CLI_HPP

#include "csipred/harness/report.hpp"
#include "csipred/harness/sweep.hpp"
#include "csipred/harness/throughput.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace csipred::cli
{
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_config = 1;
    inline constexpr int exit_runtime = 2;

    // Overrides the default output directory when --out is not given.
    inline constexpr const char *out_dir_env = "CSIPRED_OUT_DIR";

    enum class Verb
    {
        gen,
        train,
        eval,
        sweep_nmse,
        sweep_complexity,
        throughput
    };

    inline const std::vector<std::pair<Verb, std::string>> &verb_names()
    {
        static const std::vector<std::pair<Verb, std::string>> v{
            {Verb::gen, "gen"},
            {Verb::train, "train"},
            {Verb::eval, "eval"},
            {Verb::sweep_nmse, "sweep-nmse"},
            {Verb::sweep_complexity, "sweep-complexity"},
            {Verb::throughput, "throughput"},
        };
        return v;
    }

    inline std::string to_string(Verb v)
    {
        for (const auto &[verb, name] : verb_names())
            if (verb == v)
                return name;
        return "?";
    }

    struct Command
    {
        Verb verb = Verb::gen;
        std::string config_path;
        std::vector<std::string> overrides;
        std::string output_dir; // empty: $CSIPRED_OUT_DIR, then ./out
        std::optional<std::size_t> jobs;
        std::optional<std::uint64_t> seed;
    };

    struct ParseResult
    {
        std::optional<Command> command;
        int exit_code = exit_ok; // meaningful when command is empty
    };

    inline ParseResult parse_args(const std::vector<std::string> &args, std::ostream &out = std::cout, std::ostream &err = std::cerr)
    {
        CLI::App app{"Effective-SINR prediction workbench for channel aging in TDD links", "csipred"};
        app.require_subcommand(1, 1);

        Command cmd;
        std::size_t jobs = 0;
        std::uint64_t seed = 0;
        std::vector<CLI::App *> subs;
        for (const auto &[verb, name] : verb_names())
        {
            auto *sub = app.add_subcommand(name);
            sub->add_option("--config", cmd.config_path, "experiment config file (key = value lines)")->required()->check(CLI::ExistingFile);
            sub->add_option("--set", cmd.overrides, "override a config key, key=value (repeatable)");
            sub->add_option("--out", cmd.output_dir, std::string("output directory (default: $") + out_dir_env + " or ./out)");
            sub->add_option("--jobs", jobs, "parallel sweep points")->check(CLI::PositiveNumber);
            sub->add_option("--seed", seed, "base seed for channel realizations");
            subs.push_back(sub);
        }

        // CLI11 wants argv-style input in reverse order.
        std::vector<std::string> rev(args.rbegin(), args.rend());
        try
        {
            app.parse(rev);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return {std::nullopt, exit_ok};
        }
        catch (const CLI::CallForAllHelp &)
        {
            out << app.help("", CLI::AppFormatMode::All);
            return {std::nullopt, exit_ok};
        }
        catch (const CLI::ParseError &e)
        {
            err << "error: " << e.what() << "\n\n" << app.help();
            return {std::nullopt, exit_config};
        }

        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed())
            {
                cmd.verb = verb_names()[i].first;
                if (subs[i]->count("--jobs"))
                    cmd.jobs = jobs;
                if (subs[i]->count("--seed"))
                    cmd.seed = seed;
            }
        return {cmd, exit_ok};
    }

    inline ParseResult parse_args(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
    {
        std::vector<std::string> args;
        for (int i = 1; i < argc; ++i)
            args.emplace_back(argv[i]);
        return parse_args(args, out, err);
    }

    inline std::filesystem::path resolve_output_dir(const Command &cmd)
    {
        if (!cmd.output_dir.empty())
            return cmd.output_dir;
        if (const char *env = std::getenv(out_dir_env); env && *env)
            return env;
        return "out";
    }

    // Config file, then --set overrides in order, then --jobs / --seed.
    inline ExperimentConfig resolve_config(const Command &cmd)
    {
        auto cfg = load_config(cmd.config_path);
        for (const auto &kv : cmd.overrides)
            apply_override(cfg, kv);
        if (cmd.jobs)
            cfg.jobs = *cmd.jobs;
        if (cmd.seed)
            cfg.seed = *cmd.seed;
        cfg.validate();
        return cfg;
    }

    namespace detail
    {
        inline std::string condition_stem(const ExperimentConfig &cfg)
        {
            std::string p = to_string(cfg.profile);
            std::erase(p, '-');
            std::ostringstream os;
            os << p << "_" << cfg.doppler_hz << "hz";
            return os.str();
        }

        inline std::string utc_timestamp()
        {
            const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm tm{};
            gmtime_r(&now, &tm);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
            return buf;
        }

        inline std::string hex(std::uint64_t v)
        {
            std::ostringstream os;
            os << std::hex << std::setw(16) << std::setfill('0') << v;
            return os.str();
        }

        inline nlohmann::json train_config_json(const nn::TrainConfig &tc)
        {
            return {{"epochs", tc.epochs},     {"batch_size", tc.batch_size}, {"learning_rate", tc.learning_rate}, {"seed", tc.seed},
                    {"adam_beta1", tc.adam_beta1}, {"adam_beta2", tc.adam_beta2}, {"adam_eps", tc.adam_eps}};
        }

        inline void print_record(std::ostream &out, const SweepRecord &r)
        {
            out << r.profile << " f_D=" << csipred::detail::fmt_num(r.doppler_hz, 1) << "Hz " << r.model;
            if (r.hidden_d)
                out << " D=" << r.hidden_d;
            if (r.nmse_db)
                out << " nmse=" << csipred::detail::fmt_num(*r.nmse_db, 3) << "dB";
            if (r.flops)
                out << " flops=" << r.flops;
            if (r.throughput_mbps)
                out << " tput=" << csipred::detail::fmt_num(*r.throughput_mbps, 3) << "Mbps";
            if (r.baseline_mbps)
                out << " baseline=" << csipred::detail::fmt_num(*r.baseline_mbps, 3) << "Mbps";
            out << " seed=" << r.seed << '\n';
        }

        inline void write_json(const std::filesystem::path &path, const nlohmann::json &j) { write_text_file(path, j.dump(2) + "\n"); }

        inline int cmd_gen(const Command &cmd, const ExperimentConfig &cfg, const std::filesystem::path &dir, std::ostream &out)
        {
            const auto data = generate_dataset(cfg, cfg.profile, cfg.doppler_hz);
            std::filesystem::create_directories(dir);
            const auto stem = "dataset_" + condition_stem(cfg);
            const std::pair<const char *, const std::vector<WindowSample> *> splits[] = {{"train", &data.train}, {"val", &data.val}, {"test", &data.test}};
            for (const auto &[name, set] : splits)
            {
                const auto path = dir / (stem + "_" + name + ".wsmp");
                std::ofstream os(path, std::ios::binary);
                if (!os)
                    throw std::runtime_error("cannot open " + path.string() + " for writing");
                write_windows(os, *set, cfg.history_p, cfg.t_csi);
            }
            {
                std::ostringstream csv;
                write_windows_csv(csv, data.test);
                write_text_file(dir / (stem + "_test.csv"), csv.str());
            }
            const auto hash = dataset_hash(data);
            nlohmann::json meta{{"profile", data.provenance.profile},
                                {"doppler_hz", data.provenance.doppler_hz},
                                {"dataset_hash", hex(hash)},
                                {"config_hash", hex(data.provenance.config_hash)},
                                {"train_seeds", data.provenance.train_seeds},
                                {"val_seeds", data.provenance.val_seeds},
                                {"test_seeds", data.provenance.test_seeds},
                                {"overrides", cmd.overrides},
                                {"created_utc", utc_timestamp()}};
            write_json(dir / (stem + ".json"), meta);
            out << data.provenance.profile << " f_D=" << csipred::detail::fmt_num(cfg.doppler_hz, 1) << "Hz train=" << data.train.size() << " val=" << data.val.size() << " test=" << data.test.size()
                << " hash=" << hex(hash) << '\n';
            return exit_ok;
        }

        inline std::filesystem::path default_model_path(const ExperimentConfig &cfg, const std::filesystem::path &dir)
        {
            return cfg.model_path.empty() ? dir / ("model_" + nn::to_string(cfg.model_kind) + ".csip") : std::filesystem::path(cfg.model_path);
        }

        inline int cmd_train(const Command &cmd, const ExperimentConfig &cfg, const std::filesystem::path &dir, std::ostream &out)
        {
            const auto data = generate_dataset(cfg, cfg.profile, cfg.doppler_hz);
            const auto tc = cfg.train_config();
            const auto rep = nn::train(cfg.model_kind, cfg.hidden_d, data, tc);
            const auto nmse = evaluate_nmse(rep.model, data.test);

            std::filesystem::create_directories(dir);
            const auto model_path = dir / ("model_" + nn::to_string(cfg.model_kind) + ".csip");
            nn::save_model(model_path.string(), rep.model);
            nlohmann::json meta{{"model_kind", nn::to_string(cfg.model_kind)},
                                {"P", cfg.history_p},
                                {"D", cfg.hidden_d},
                                {"t_csi", cfg.t_csi},
                                {"norm_mean", rep.model.norm_mean},
                                {"norm_std", rep.model.norm_std},
                                {"train_config", train_config_json(tc)},
                                {"dataset_hash", hex(dataset_hash(data))},
                                {"profile", to_string(cfg.profile)},
                                {"doppler_hz", cfg.doppler_hz},
                                {"train_loss_db2", rep.train_loss},
                                {"val_loss_db2", rep.val_loss},
                                {"test_nmse_db", nmse.model_db},
                                {"test_hold_nmse_db", nmse.hold_db},
                                {"overrides", cmd.overrides},
                                {"created_utc", utc_timestamp()}};
            write_json(std::filesystem::path(model_path).replace_extension(".json"), meta);
            out << to_string(cfg.profile) << " f_D=" << csipred::detail::fmt_num(cfg.doppler_hz, 1) << "Hz " << nn::to_string(cfg.model_kind) << " D=" << cfg.hidden_d
                << " nmse=" << csipred::detail::fmt_num(nmse.model_db, 3) << "dB hold=" << csipred::detail::fmt_num(nmse.hold_db, 3) << "dB -> " << model_path.string() << '\n';
            return exit_ok;
        }

        inline void check_model_dims(const nn::PredictorModel &m, const ExperimentConfig &cfg)
        {
            if (m.history_p != cfg.history_p || m.t_csi != cfg.t_csi)
                throw DimensionError("model dimensions mismatch: expected P = " + std::to_string(cfg.history_p) + ", T_CSI = " + std::to_string(cfg.t_csi) +
                                     ", found P = " + std::to_string(m.history_p) + ", T_CSI = " + std::to_string(m.t_csi));
        }

        inline int cmd_eval(const ExperimentConfig &cfg, const std::filesystem::path &dir, std::ostream &out)
        {
            const auto model = nn::load_model(default_model_path(cfg, dir).string());
            check_model_dims(model, cfg);
            const auto data = generate_dataset(cfg, cfg.profile, cfg.doppler_hz);
            const auto nmse = evaluate_nmse(model, data.test);
            TrainedModel tm{model, cfg.train_seed, nmse.model_db};
            std::vector<SweepRecord> recs{hold_record(cfg, cfg.profile, cfg.doppler_hz, data), model_record(cfg, cfg.profile, cfg.doppler_hz, tm)};
            emit_report(recs, dir, "eval_" + condition_stem(cfg));
            for (const auto &r : recs)
                print_record(out, r);
            return exit_ok;
        }

        inline int cmd_sweep_nmse(const ExperimentConfig &cfg, const std::filesystem::path &dir, std::ostream &out)
        {
            const auto recs = run_nmse_sweep(cfg, cfg.model_kinds, cfg.hidden_d, [&](const SweepRecord &r) { print_record(out, r); });
            emit_report(recs, dir, "nmse_sweep");
            return exit_ok;
        }

        inline int cmd_sweep_complexity(const ExperimentConfig &cfg, const std::filesystem::path &dir, std::ostream &out)
        {
            const auto recs = run_complexity_sweep(cfg, cfg.d_list, [&](const SweepRecord &r) { print_record(out, r); });
            emit_report(recs, dir, "complexity_sweep");
            return exit_ok;
        }

        // Throughput of cfg.policy against the stale baseline for every Doppler in
        // doppler_list_hz on cfg.profile.
        inline int cmd_throughput(const ExperimentConfig &cfg, const std::filesystem::path &dir, std::ostream &out)
        {
            std::optional<nn::PredictorModel> loaded;
            const bool predictive = cfg.policy == Policy::dnn || cfg.policy == Policy::lstm;
            if (predictive && !cfg.model_path.empty())
            {
                loaded = nn::load_model(cfg.model_path);
                check_model_dims(*loaded, cfg);
                if (loaded->kind != (cfg.policy == Policy::dnn ? nn::ModelKind::dnn : nn::ModelKind::lstm))
                    throw ConfigError("model file kind " + nn::to_string(loaded->kind) + " does not match policy " + to_string(cfg.policy));
            }

            std::vector<SweepRecord> recs(cfg.doppler_list_hz.size());
            auto inner = cfg;
            inner.jobs = 1;
            parallel_for(recs.size(), cfg.jobs, [&](std::size_t i) {
                const double f = cfg.doppler_list_hz[i];
                std::optional<nn::PredictorModel> model = loaded;
                std::uint64_t seed = cfg.seed;
                if (predictive && !model)
                {
                    const auto data = generate_dataset(inner, cfg.profile, f);
                    const auto tc = inner.train_config();
                    model = nn::train(cfg.policy == Policy::dnn ? nn::ModelKind::dnn : nn::ModelKind::lstm, cfg.hidden_d, data, tc).model;
                    seed = tc.seed;
                }
                ThroughputModels tm;
                if (cfg.policy == Policy::dnn)
                    tm.dnn = &*model;
                if (cfg.policy == Policy::lstm)
                    tm.lstm = &*model;
                std::vector<Policy> pols{cfg.policy};
                if (cfg.policy != Policy::stale)
                    pols.push_back(Policy::stale);
                const auto res = simulate_throughput(inner, cfg.profile, f, cfg.throughput_slots, pols, tm);

                auto &r = recs[i];
                r.profile = to_string(cfg.profile);
                r.doppler_hz = f;
                r.model = to_string(cfg.policy);
                r.hidden_d = model ? model->hidden() : 0;
                r.history_p = cfg.history_p;
                r.t_csi = cfg.t_csi;
                r.flops = model ? model->flops() : 0;
                r.throughput_mbps = res.at(cfg.policy).throughput_mbps;
                r.baseline_mbps = res.at(Policy::stale).throughput_mbps;
                r.seed = seed;
            });
            for (const auto &r : recs)
                print_record(out, r);
            emit_report(recs, dir, "throughput_" + to_string(cfg.policy));
            return exit_ok;
        }
    } // namespace detail

    // Runs a parsed command. Configuration problems exit 1, everything else that
    // goes wrong exits 2; both print a diagnostic to `err`.
    inline int dispatch(const Command &cmd, std::ostream &out = std::cout, std::ostream &err = std::cerr)
    {
        ExperimentConfig cfg;
        try
        {
            cfg = resolve_config(cmd);
        }
        catch (const std::exception &e)
        {
            err << "config error: " << e.what() << '\n';
            return exit_config;
        }

        const auto dir = resolve_output_dir(cmd);
        try
        {
            switch (cmd.verb)
            {
            case Verb::gen:
                return detail::cmd_gen(cmd, cfg, dir, out);
            case Verb::train:
                return detail::cmd_train(cmd, cfg, dir, out);
            case Verb::eval:
                return detail::cmd_eval(cfg, dir, out);
            case Verb::sweep_nmse:
                return detail::cmd_sweep_nmse(cfg, dir, out);
            case Verb::sweep_complexity:
                return detail::cmd_sweep_complexity(cfg, dir, out);
            case Verb::throughput:
                return detail::cmd_throughput(cfg, dir, out);
            }
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << '\n';
            return exit_runtime;
        }
        return exit_runtime;
    }
} // namespace csipred::cli

#endif // CSIPRED_CLI_CLI_HPP
