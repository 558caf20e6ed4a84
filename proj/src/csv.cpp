#include "amcmc/csv.hpp"

#include <charconv>
#include <cstdio>

#include "amcmc/errors.hpp"

namespace amcmc {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t config_hash,
                     std::uint64_t seed, const std::vector<std::string>& columns)
    : columns_(columns.size()) {
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw ConfigError("cannot open output file " + path.string());
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash));
    out_ << "# config_hash=" << hash_hex << " seed=" << seed
         << " version=" << kVersion << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::write_row(const std::vector<double>& values) {
    if (values.size() != columns_) throw DimensionError("CsvWriter: column mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::write_raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw DimensionError("CsvWriter: column mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
    out_ << "\n";
}

}  // namespace amcmc
