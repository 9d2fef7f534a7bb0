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

#ifndef CSIPRED_COMMON_HPP
#define CSIPRED_COMMON_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace csipred
{
    // Error taxonomy. ConfigError maps to CLI exit code 1, everything else to 2.
    struct ConfigError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct DimensionError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    struct DegenerateChannelError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct FormatError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

    // SplitMix64 finalizer; used to derive independent sub-seeds from a base seed.
    inline std::uint64_t mix_seed(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0)
    {
        return mix_seed(mix_seed(mix_seed(base) ^ a) ^ (b * 0x632BE59BD9B4E019ULL));
    }

    // 64-bit FNV-1a, incremental.
    class Fnv1a
    {
      public:
        void update(const void *data, std::size_t n)
        {
            const auto *p = static_cast<const unsigned char *>(data);
            for (std::size_t i = 0; i < n; ++i)
            {
                state_ ^= p[i];
                state_ *= 0x100000001B3ULL;
            }
        }
        void update(double v) { update(&v, sizeof v); }
        void update(std::uint64_t v) { update(&v, sizeof v); }
        void update(std::string_view s) { update(s.data(), s.size()); }
        std::uint64_t digest() const { return state_; }

      private:
        std::uint64_t state_ = 0xCBF29CE484222325ULL;
    };

    // Little-endian binary helpers shared by the file formats.
    namespace binio
    {
        static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

        template <typename T>
        T to_le(T v)
        {
            if constexpr (std::endian::native == std::endian::big)
            {
                unsigned char b[sizeof(T)];
                std::memcpy(b, &v, sizeof(T));
                for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
                    std::swap(b[i], b[sizeof(T) - 1 - i]);
                std::memcpy(&v, b, sizeof(T));
            }
            return v;
        }

        template <typename T>
        void write(std::ostream &os, T v)
        {
            v = to_le(v);
            os.write(reinterpret_cast<const char *>(&v), sizeof(T));
        }

        template <typename T>
        T read(std::istream &is)
        {
            T v{};
            is.read(reinterpret_cast<char *>(&v), sizeof(T));
            if (!is)
                throw FormatError("unexpected end of file");
            return to_le(v);
        }

        inline void write_magic(std::ostream &os, std::string_view magic) { os.write(magic.data(), static_cast<std::streamsize>(magic.size())); }

        inline void expect_magic(std::istream &is, std::string_view magic)
        {
            std::string got(magic.size(), '\0');
            is.read(got.data(), static_cast<std::streamsize>(got.size()));
            if (!is || got != magic)
                throw FormatError("bad magic: expected \"" + std::string(magic) + "\"");
        }
    } // namespace binio
} // namespace csipred

#endif // CSIPRED_COMMON_HPP
