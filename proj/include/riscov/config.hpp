#pragma once

#include <iosfwd>
#include <string>

#include "riscov/harness.hpp"

namespace riscov {

/// Reads an INI-style file with sections [scene], [channel], [dome], [pga],
/// [bound] and [experiment]. Missing keys keep their defaults; unknown keys and
/// malformed values throw std::runtime_error naming the key.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);

/// Writes every key with its current value in a form parse_config accepts.
void write_config(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace riscov
