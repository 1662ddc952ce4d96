#include "cycheck/progress.hpp"

#include <cinttypes>
#include <cstdio>

namespace cycheck {

std::string render_progress(const ProgressRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "[progress] states=%" PRIu64 " trans=%" PRIu64 " rounds=%" PRIu64
                " iters=%" PRIu64 " kernel-calls=%" PRIu64,
                r.states, r.transitions, r.rounds, r.iterations, r.kernel_calls);
  return buf;
}

std::optional<ProgressRecord> parse_progress(std::string_view line) {
  ProgressRecord r;
  std::string owned(line);
  int matched = std::sscanf(owned.c_str(),
                            "[progress] states=%" SCNu64 " trans=%" SCNu64 " rounds=%" SCNu64
                            " iters=%" SCNu64 " kernel-calls=%" SCNu64,
                            &r.states, &r.transitions, &r.rounds, &r.iterations, &r.kernel_calls);
  if (matched != 5) return std::nullopt;
  if (render_progress(r) != owned) return std::nullopt;
  return r;
}

}  // namespace cycheck
