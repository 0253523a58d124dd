#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crc/engine.hpp"
#include "crc/estimate.hpp"

namespace crc {

// Yield CSV: header "date,tau_0.25,tau_0.5,...", one row per business day,
// ISO-8601 dates, yields as decimals. Empty cells become NaN.
YieldPanel load_yield_panel(const std::filesystem::path& path);
void write_yield_panel(const YieldPanel& panel, const std::filesystem::path& path);

// Columnar path output: path,step,t,r,B,yield_<tau>...,y_vol,y_beta,rejected
void write_ensemble_csv(const PathEnsemble& ensemble, const std::filesystem::path& path);

// Compact binary ensemble: magic "CRCENS01", u32 version, dims, then per path
// a record block of little-endian f64, ending with the rejection flag.
void write_ensemble_binary(const PathEnsemble& ensemble, const std::filesystem::path& path);

// FNV-1a/64 over the file bytes, hex-encoded; used for manifest checksums.
std::string file_checksum(const std::filesystem::path& path);

// Every tabular output starts with "# crcsim-csv v1" so schemas are versioned.
extern const char* kCsvSchemaHeader;

struct RunManifest {
    std::string command;                          // subcommand name
    std::string config_json;                      // full configuration echo
    std::uint64_t seed = 0;
    std::string build;                            // toolchain/build id
    std::map<std::string, std::string> inputs;    // path -> checksum
    std::map<std::string, std::string> outputs;   // path -> checksum

    void write(const std::filesystem::path& path) const;
    static RunManifest load(const std::filesystem::path& path);
};

}  // namespace crc
