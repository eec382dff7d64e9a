#pragma once

// Report generation behind the varmech command-line tool.

#include <string>

#include "varmech/multiplier.hpp"

namespace varmech::cli {

enum class Command { check, construct, multiplier, roundtrip };
enum class Format { text, json };

struct RunConfig {
    Command command = Command::check;
    std::string input;
    ZeroTestSettings settings;
    Format format = Format::text;
    std::string output;  // empty: standard output
};

/// Exit codes: 0 pass or constructed, 1 usage/input error, 2 conditions
/// fail or the analysis could not be completed.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 1;
inline constexpr int exit_analysis = 2;

struct RunResult {
    int exit_code = exit_ok;
    std::string report;  // empty when the input could not be read
    std::string diagnostic;  // message for standard error, if any
};

[[nodiscard]] Command parse_command(const std::string& name);
[[nodiscard]] const char* to_string(Command c) noexcept;

/// Runs one command on the document text. Byte-deterministic in
/// (document, command, settings, format).
[[nodiscard]] RunResult run_document(const std::string& document, Command command, const ZeroTestSettings& settings,
                                     Format format);

/// Reads config.input and calls run_document; does not write the output.
[[nodiscard]] RunResult run(const RunConfig& config);

}  // namespace varmech::cli
