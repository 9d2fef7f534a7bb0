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

#ifndef CSIPRED_HARNESS_REPORT_HPP
#define CSIPRED_HARNESS_REPORT_HPP

#include "csipred/harness/sweep.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace csipred
{
    inline constexpr const char *csv_header = "profile,doppler_hz,model,D,P,t_csi,nmse_db,flops,throughput_mbps,baseline_mbps,seed";

    namespace detail
    {
        inline std::string fmt_num(double v, int precision = 6)
        {
            std::ostringstream os;
            os << std::fixed << std::setprecision(precision) << v;
            return os.str();
        }

        inline std::string fmt_opt(const std::optional<double> &v) { return v ? fmt_num(*v) : std::string(); }
    } // namespace detail

    inline std::string format_csv(const std::vector<SweepRecord> &records)
    {
        std::ostringstream os;
        os << csv_header << '\n';
        for (const auto &r : records)
        {
            os << r.profile << ',' << detail::fmt_num(r.doppler_hz, 3) << ',' << r.model << ',' << r.hidden_d << ',' << r.history_p << ',' << r.t_csi << ','
               << detail::fmt_opt(r.nmse_db) << ',' << r.flops << ',' << detail::fmt_opt(r.throughput_mbps) << ',' << detail::fmt_opt(r.baseline_mbps) << ',' << r.seed << '\n';
        }
        return os.str();
    }

    inline std::string format_summary(const std::vector<SweepRecord> &records)
    {
        std::ostringstream os;
        os << std::left << std::setw(7) << "profile" << std::right << std::setw(9) << "f_D[Hz]" << "  " << std::left << std::setw(7) << "model" << std::right << std::setw(4) << "D"
           << std::setw(12) << "NMSE[dB]" << std::setw(10) << "FLOPs" << std::setw(12) << "tput[Mbps]" << std::setw(12) << "base[Mbps]" << std::setw(8) << "seed" << '\n';
        for (const auto &r : records)
        {
            os << std::left << std::setw(7) << r.profile << std::right << std::setw(9) << detail::fmt_num(r.doppler_hz, 1) << "  " << std::left << std::setw(7) << r.model << std::right
               << std::setw(4) << r.hidden_d << std::setw(12) << (r.nmse_db ? detail::fmt_num(*r.nmse_db, 3) : "-") << std::setw(10) << r.flops << std::setw(12)
               << (r.throughput_mbps ? detail::fmt_num(*r.throughput_mbps, 3) : "-") << std::setw(12) << (r.baseline_mbps ? detail::fmt_num(*r.baseline_mbps, 3) : "-") << std::setw(8)
               << r.seed << '\n';
        }
        return os.str();
    }

    inline void write_text_file(const std::filesystem::path &path, const std::string &content)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        os << content;
        if (!os)
            throw std::runtime_error("write failed: " + path.string());
    }

    struct ReportPaths
    {
        std::filesystem::path csv;
        std::filesystem::path summary;
    };

    // Writes <stem>.csv and <stem>_summary.txt into out_dir.
    inline ReportPaths emit_report(const std::vector<SweepRecord> &records, const std::filesystem::path &out_dir, const std::string &stem)
    {
        if (records.empty())
            throw std::invalid_argument("emit_report: no records");
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
        ReportPaths p{out_dir / (stem + ".csv"), out_dir / (stem + "_summary.txt")};
        write_text_file(p.csv, format_csv(records));
        write_text_file(p.summary, format_summary(records));
        return p;
    }
} // namespace csipred

#endif // CSIPRED_HARNESS_REPORT_HPP
