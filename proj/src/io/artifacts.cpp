#include "kpplab/io/artifacts.hpp"

#include <cstdio>
#include <fstream>

#include "kpplab/errors.hpp"
#include "kpplab/version.hpp"

namespace kpplab::io {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const ArtifactMeta& meta,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "# version: " << kVersion << "\n";
    out << "# config: " << meta.config_hash << "\n";
    out << "# seed: " << meta.seed << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

void write_json(const std::string& path, const ArtifactMeta& meta,
                nlohmann::json payload) {
    payload["meta"] = {{"version", kVersion},
                       {"config", meta.config_hash},
                       {"seed", meta.seed}};
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << payload.dump(2) << "\n";
}

}  // namespace kpplab::io
