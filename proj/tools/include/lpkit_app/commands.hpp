#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/cube_geometry.hpp"
#include "lpkit_app/config.hpp"

namespace lpkit::app {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_precondition = 3,
    exit_verification = 4,
    exit_malformed_input = 5,
};

const std::vector<std::string>& operator_names();

/// Writes the manifest and every entry of the configured corpus under out_dir/corpus.
int cmd_corpus(const RunConfig& config, std::ostream& log);

/// Writes out_dir/<operator>.<ext> (one file per component for grad) and out_dir/<operator>.meta.json.
int cmd_apply(const RunConfig& config, std::string_view op, const std::filesystem::path& input, std::ostream& log);

/**
 * kind "whitney" reads an open-set file
 *   {"schema_version": 1, "kind": "open_set", "dim": 1, "period": 4, "periodic": false,
 *    "boxes": [{"lo": [0], "hi": [1]}]}
 * kind "cz" reads a grid function. Writes out_dir/<kind>.json.
 */
int cmd_decompose(const RunConfig& config, std::string_view kind, const std::filesystem::path& input,
                  std::ostream& log);

/// Runs the configured suite; writes out_dir/report.json and out_dir/ratios/<experiment>.csv.
int cmd_verify(const RunConfig& config, std::ostream& log);

OpenSetMask parse_open_set(std::string_view text);

/// Runs body and maps library exceptions to exit codes, printing the message to err.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace lpkit::app
