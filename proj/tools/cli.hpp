#pragma once

#include "boundwalk/walk_synthesis.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace boundwalk::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kInternal = 3 };

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Target file: a JSON object with `vertices` (unit vectors), `edges` (index
/// pairs), `basepoint` (vertex index) and optionally `dimension`. When both
/// the file and `dimension` give a dimension they must agree.
TargetSet read_target(std::istream& in, std::optional<std::size_t> dimension = std::nullopt);
TargetSet load_target(const std::string& path, std::optional<std::size_t> dimension = std::nullopt);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace boundwalk::cli
