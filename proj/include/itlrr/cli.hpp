#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itlrr::cli {

// Hyperparameters tuned per benchmark scene.
struct Preset {
    std::string_view name;
    double p;
    std::size_t regions;
    double alpha;
    double beta;
};

[[nodiscard]] std::span<const Preset> presets() noexcept;
[[nodiscard]] std::optional<Preset> find_preset(std::string_view name) noexcept;

// Runs the command line (args exclude the program name). Returns the process exit
// code: 0 success, 2 input/validation error, 3 protocol error, 4 numerical failure.
// Failures print one "E_<KIND>: <reason>" line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace itlrr::cli
