#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace kpplab::io {

struct ArtifactMeta {
    std::string config_hash;
    std::uint64_t seed = 0;
};

// CSV with '#' metadata header lines (tool version, config hash, seed) and
// %.17g doubles: byte-identical across runs with the same config and seed.
void write_csv(const std::string& path, const ArtifactMeta& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

// JSON artifact with the same metadata embedded under "meta".
void write_json(const std::string& path, const ArtifactMeta& meta,
                nlohmann::json payload);

}  // namespace kpplab::io
