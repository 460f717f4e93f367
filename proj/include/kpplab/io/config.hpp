#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "kpplab/potentials.hpp"

namespace kpplab::io {

// Flat key-value configuration with [section] tables. Keys are addressed as
// "section.key"; keys before any section header live at the top level.
class Config {
  public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key, double dflt) const;
    std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;

    std::string require(const std::string& key) const;
    double require_double(const std::string& key) const;

    // FNV-1a over the sorted normalized entries; embedded in every artifact.
    std::string hash() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

// Builds the potential from a [potential] table with keys kind / c0 /
// values / coeffs / alpha / phase, or from a compact command-line spec:
//   constant:<c0>
//   periodic:<v0>,<v1>,...
//   amo:<kappa>,<C>[,<alpha>[,<phase>]]      (alpha defaults to the golden mean)
Potential potential_from_config(const Config& cfg);
Potential parse_potential_arg(const std::string& spec);

inline constexpr double kGoldenMean = 0.61803398874989484820458683436564;

}  // namespace kpplab::io
