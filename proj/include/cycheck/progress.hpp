#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cycheck/explore.hpp"

namespace cycheck {

/// Exact wire format:
/// `[progress] states=<u> trans=<u> rounds=<u> iters=<u> kernel-calls=<u>`
/// (fixed field order, single spaces, decimal integers).
std::string render_progress(const ProgressRecord& record);

/// Inverse of render_progress; nullopt if the line does not match.
std::optional<ProgressRecord> parse_progress(std::string_view line);

}  // namespace cycheck
