#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace amcmc {

inline constexpr std::string_view kVersion = "0.1.0";

// 64-bit FNV-1a; used to stamp outputs with a hash of the canonical config.
std::uint64_t fnv1a64(std::string_view bytes);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

// CSV with a leading metadata comment:
//   # config_hash=<hex> seed=<u64> version=<semver>
// followed by a header row. Rows are written with shortest-round-trip
// doubles so identical runs are byte-identical and diff-able.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash,
              std::uint64_t seed, const std::vector<std::string>& columns);

    void write_row(const std::vector<double>& values);
    void write_raw_row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace amcmc
