#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hawkes::cli {

// Values an experiment config file may provide. Flags override these.
struct FileConfig {
    std::optional<double> mu, alpha, beta, t;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> mc, reps, workers, grid;
    std::optional<std::string> out;
};

// Reads TOML (flat key = value schema, an optional [experiment] table header
// is tolerated) or JSON, chosen by the .json extension. Unknown keys are
// rejected with a line diagnostic.
FileConfig load_config_file(const std::string& path);

}  // namespace hawkes::cli
